import math

import mpmath as mp
import numpy as np
import pytest

from quasibound import greens
from quasibound.errors import ContractError, DomainError
from quasibound.greens import SelectionClass, selection_apply
from quasibound.waves import TRIG, Region, Waveform

M = 0.5


def fd_jump(fn, x0, h=1e-4):
    right = (-3 * fn(x0) + 4 * fn(x0 + h) - fn(x0 + 2 * h)) / (2 * h)
    left = (3 * fn(x0) - 4 * fn(x0 - h) + fn(x0 - 2 * h)) / (2 * h)
    return right - left


def fd_second(fn, x, h=1e-3):
    return (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * fn(x) + 16 * fn(x - h) - fn(x - 2 * h)) / (12 * h * h)


def test_uniform_continuity_and_jump():
    e, xs, f = -1.0, 0.3, 0.1
    g = lambda x: greens.green_uniform(e, x, xs, f, M)
    assert g(xs) == pytest.approx(g(xs + 1e-12), abs=1e-12)
    assert fd_jump(g, xs) == pytest.approx(2 * M, rel=1e-5)


def test_uniform_dual_path_at_origin():
    e, f = -1.0, 0.1
    kap = (2 * M * f) ** (1 / 3)
    z = -kap * e / f
    ref = -(mp.pi * kap ** 2 / f) * mp.scorerhi(z) * mp.airyai(z)
    assert greens.green_uniform(e, 0.0, 0.0, f, M) == pytest.approx(float(ref), rel=1e-11)


@pytest.mark.parametrize("seed", range(10))
def test_green_properties_random(seed):
    rng = np.random.default_rng(seed)
    e, xs, f = rng.uniform(-2, 2), rng.uniform(-1, 1), rng.uniform(0.2, 2)
    g = lambda x: greens.green_uniform(e, x, xs, f, M)
    assert fd_jump(g, xs) == pytest.approx(2 * M, rel=1e-5)
    x = xs + np.linspace(0.5, 3, 6)
    x = np.concatenate([xs - np.linspace(0.5, 3, 6), x])
    assert np.max(np.abs(fd_second(g, x) + 2 * M * (e + f * x) * g(x))) < 1e-6
    wave = Waveform(greens.green_uniform_regions(e, xs, f, M))
    assert abs(selection_apply(SelectionClass.UNIFORM_FIELD, wave)) < 1e-7

    en, rs = rng.uniform(0.3, 3), rng.uniform(0.3, 3)
    u = lambda r: r * greens.green_swave(en, r, rs, M)
    r = rs + np.linspace(0.3, 2, 5)
    assert np.max(np.abs(fd_second(u, r) + 2 * M * en * u(r))) < 1e-6
    assert fd_jump(lambda r: greens.green_swave(en, r, rs, M), rs) == pytest.approx(2 * M / rs ** 2, rel=1e-5)
    assert abs(selection_apply(SelectionClass.SWAVE, Waveform(greens.green_swave_regions(en, rs, M)))) < 1e-7

    for parity, cls in ((1, SelectionClass.FREE_EVEN), (-1, SelectionClass.FREE_ODD)):
        gf = lambda x: greens.green_free(parity, en, x, rs, M)
        assert fd_jump(gf, rs) == pytest.approx(M, rel=1e-5)
        assert np.max(np.abs(fd_second(gf, r) + 2 * M * en * gf(r))) < 1e-6
        assert abs(selection_apply(cls, Waveform(greens.green_free_regions(parity, en, rs, M)))) < 1e-7


def test_swave_regular_at_origin():
    v = greens.green_swave(1.5, np.array([0.0, 1e-8]), 1.0, M)
    assert np.all(np.isfinite(v)) and v[0] == pytest.approx(v[1], rel=1e-12)


@pytest.mark.parametrize("r_source", [0.5, 1.0, 3.0])
def test_swave_selection_at_listed_sources(r_source):
    k = 2.0
    en = k * k / (2 * M)
    assert abs(selection_apply(SelectionClass.SWAVE, Waveform(greens.green_swave_regions(en, r_source, M)))) < 1e-8


@pytest.mark.parametrize("x_source", [0.5, 2.0])
def test_free_selection_at_listed_sources(x_source):
    k = 1.7
    en = k * k / (2 * M)
    for parity, cls in ((1, SelectionClass.FREE_EVEN), (-1, SelectionClass.FREE_ODD)):
        w = Waveform(greens.green_free_regions(parity, en, x_source, M))
        assert abs(selection_apply(cls, w)) < 1e-8


def test_odd_free_green_is_scaled_swave():
    rng = np.random.default_rng(7)
    for _ in range(20):
        en, x, xs = rng.uniform(0.2, 4), rng.uniform(0.05, 6), rng.uniform(0.05, 6)
        assert 2 * greens.green_free(-1, en, x, xs, M) == pytest.approx(
            x * xs * greens.green_swave(en, x, xs, M), rel=1e-12, abs=1e-14)


def test_free_reflection_symmetry():
    en, xs = 1.2, 0.8
    x = np.array([0.3, 1.4, 2.5])
    for parity in (1, -1):
        assert np.allclose(greens.green_free(parity, en, -x, xs), parity * greens.green_free(parity, en, x, xs))
        assert np.allclose(greens.green_free(parity, en, x, -xs), parity * greens.green_free(parity, en, x, xs))


def test_even_free_green_flat_at_origin():
    g = lambda x: greens.green_free(1, 1.3, x, 0.9, M)
    h = 1e-5
    assert abs((g(2 * h) - g(h)) / h) < 1e-4


def test_plane_waves_are_not_selected():
    k = 1.3
    w = Waveform([Region(0.0, math.inf, TRIG, (k, 1.0, 0.0))])
    # int_0^inf x^{-1/2} (-k sin kx) dx = -sqrt(pi k / 2)
    assert selection_apply(SelectionClass.FREE_EVEN, w) == pytest.approx(-math.sqrt(math.pi * k / 2), rel=1e-9)
    # R = j0(kr), u = sin(kr)/k: int R / sqrt(r) dr = sqrt(2 pi / k)
    w = Waveform([Region(0.0, math.inf, TRIG, (k, 0.0, 1.0 / k))])
    assert selection_apply(SelectionClass.SWAVE, w) == pytest.approx(math.sqrt(2 * math.pi / k), rel=1e-9)


def test_selection_contract_errors():
    with pytest.raises(ContractError):
        selection_apply(SelectionClass.SWAVE, Waveform([Region(0.0, 1.0, TRIG, (1.0, 0.0, 1.0))]))
    with pytest.raises(ContractError):
        selection_apply(SelectionClass.FREE_ODD, Waveform([Region(1.0, math.inf, TRIG, (1.0, 0.0, 1.0))]))
    with pytest.raises(ContractError):
        selection_apply(SelectionClass.SWAVE, "not a wave")
    with pytest.raises(DomainError):
        greens.green_swave(-1.0, 1.0, 1.0)
    with pytest.raises(DomainError):
        greens.green_free(2, 1.0, 1.0, 1.0)


def test_cesaro_average_decreases():
    # kappa = 1 units: 2 m F = 1, E = -1
    e, f = -1.0, 1.0
    kap = (2 * M * f) ** (1 / 3)
    g = lambda x: greens.green_uniform(e, x, 0.0, f, M)
    vals = [abs(greens.cesaro_uniform_integral(g, L, kap, e / f)) for L in (20.0, 40.0, 80.0)]
    assert vals[0] > vals[1] > vals[2]
    assert vals[2] < 1e-3
