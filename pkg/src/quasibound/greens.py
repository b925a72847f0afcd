"""Green's functions for stationary quasibound states and the selection
functionals they annihilate.

Classes and the integral each selection functional evaluates::

    UNIFORM_FIELD   int_{-inf}^{inf} psi(x) dx
    SWAVE           int_0^inf R(r) / sqrt(r) dr      (wave given as u = r R)
    FREE_EVEN/ODD   int_0^inf psi'(x) / sqrt(x) dx

All Green's functions use hbar = 1 and accept an explicit mass.
"""

from __future__ import annotations

import math
from enum import Enum

import numpy as np
from scipy import special

from .errors import ContractError, DomainError
from .solver import QuadratureSpec, adaptive_quad
from .specfun import fresnel_fg, half_power_tail, scorer
from .waves import AIRY, TRIG, Region, Waveform

SELECTION_QUAD = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-15, max_depth=50)


class SelectionClass(Enum):
    UNIFORM_FIELD = "uniform-field"
    SWAVE = "s-wave"
    FREE_EVEN = "free-even"
    FREE_ODD = "free-odd"


def _wavenumber(energy, mass):
    if not energy > 0:
        raise DomainError(f"energy must be positive in this continuum (spectrum starts at 0), got {energy!r}")
    return math.sqrt(2 * mass * energy)


def _g_of(k, r):
    return float(fresnel_fg(math.sqrt(2 * k * r / math.pi))[1])


# --- uniform field ---------------------------------------------------------

def _uniform_consts(energy, x_source, force, mass):
    if not (force > 0 and mass > 0):
        raise DomainError("uniform-field Green's function needs force > 0 and mass > 0")
    kap = (2 * mass * force) ** (1.0 / 3.0)
    shift = energy / force
    ts = -kap * (x_source + shift)          # argument -z' of the source point
    _, hi = scorer(ts)
    ai, _, bi, _ = special.airy(ts)
    c = math.pi * kap * kap / force
    return kap, shift, c, hi, ai, bi


def green_uniform(energy, x, x_source, force, mass=0.5):
    """Uniform-field Green's function G_E(x, x') (vectorised in ``x``)."""
    kap, shift, c, hi_s, ai_s, bi_s = _uniform_consts(energy, x_source, force, mass)
    x = np.asarray(x, dtype=float)
    ai, _, bi, _ = special.airy(-kap * (x + shift))
    out = -c * hi_s * ai + c * np.where(x > x_source, ai * bi_s - bi * ai_s, 0.0)
    return out if out.ndim else float(out)


def green_uniform_regions(energy, x_source, force, mass=0.5):
    """The uniform-field Green's function as two Airy regions split at ``x_source``."""
    kap, shift, c, hi_s, ai_s, bi_s = _uniform_consts(energy, x_source, force, mass)
    left = Region(-math.inf, x_source, AIRY, (kap, shift, -c * hi_s, 0.0))
    right = Region(x_source, math.inf, AIRY, (kap, shift, -c * hi_s + c * bi_s, -c * ai_s))
    return [left, right]


# --- s-waves and the free particle -----------------------------------------

def green_swave(energy, r, r_source, mass=0.5):
    """s-wave Green's function G_E^0(r, r') (vectorised in ``r``)."""
    k = _wavenumber(energy, mass)
    if not r_source > 0:
        raise DomainError("green_swave: r_source must be positive")
    r = np.asarray(r, dtype=float)
    pref = 2 * mass / r_source
    g = _g_of(k, r_source)
    kr = k * r
    regular = np.sinc(kr / math.pi)
    safe = np.where(r > 0, kr, 1.0)
    out = -pref * 2 * g * regular + pref * np.where(r > r_source, np.sin(kr - k * r_source) / safe, 0.0)
    return out if out.ndim else float(out)


def green_swave_regions(energy, r_source, mass=0.5):
    """Regions of ``u(r) = r G_E^0(r, r')``, the form consumed by the s-wave functional."""
    k = _wavenumber(energy, mass)
    pref = 2 * mass / (r_source * k)
    g = _g_of(k, r_source)
    inner_b = -pref * 2 * g
    cs, ss = math.cos(k * r_source), math.sin(k * r_source)
    # sin(k r - k r') = cos(k r') sin(k r) - sin(k r') cos(k r)
    return [
        Region(0.0, r_source, TRIG, (k, 0.0, inner_b)),
        Region(r_source, math.inf, TRIG, (k, -pref * ss, inner_b + pref * cs)),
    ]


def green_free(parity, energy, x, x_source, mass=0.5):
    """Even (``+1``) or odd (``-1``) free-particle Green's function component.

    Defined on ``x, x' >= 0`` and extended to the whole line by the same
    reflection symmetry in either argument.
    """
    if parity not in (1, -1):
        raise DomainError(f"green_free: parity must be +1 or -1, got {parity!r}")
    k = _wavenumber(energy, mass)
    x = np.asarray(x, dtype=float)
    sign = np.where(x < 0, parity, 1) * (parity if x_source < 0 else 1)
    ax, axs = np.abs(x), abs(x_source)
    g = _g_of(k, axs) if axs > 0 else 0.5
    pref = mass / k
    step = np.where(ax > axs, np.sin(k * ax - k * axs), 0.0)
    if parity < 0:
        out = -pref * 2 * g * np.sin(k * ax) + pref * step
    else:
        out = pref * 2 * g * np.cos(k * ax) + pref * step
    out = sign * out
    return out if out.ndim else float(out)


def green_free_regions(parity, energy, x_source, mass=0.5):
    """Regions of G^(+-)(x, x') on ``x >= 0`` for a source at ``x' >= 0``."""
    k = _wavenumber(energy, mass)
    pref = mass / k
    g = _g_of(k, x_source) if x_source > 0 else 0.5
    cs, ss = math.cos(k * x_source), math.sin(k * x_source)
    if parity < 0:
        a0, b0 = 0.0, -pref * 2 * g
    else:
        a0, b0 = pref * 2 * g, 0.0
    regions = [Region(x_source, math.inf, TRIG, (k, a0 - pref * ss, b0 + pref * cs))]
    if x_source > 0:
        regions.insert(0, Region(0.0, x_source, TRIG, (k, a0, b0)))
    return regions


# --- selection functionals -------------------------------------------------

def _airy_antiderivative_from_zero(t0, which):
    # int_0^{t0} Ai(t) dt (which=0) or Bi(t) dt (which=2), signed
    if t0 == 0:
        return 0.0
    lo, hi = (0.0, t0) if t0 > 0 else (t0, 0.0)
    val = adaptive_quad(lambda t: special.airy(t)[which], lo, hi, SELECTION_QUAD)
    return val if t0 > 0 else -val


def _airy_tail(region, toward):
    """Integral of an Airy region over its infinite side."""
    kap, s, a, b = region.coeffs
    if toward > 0:
        # x in [lo, inf): t = -kap (x + s) runs from t0 down to -inf
        t0 = -kap * (region.lo + s)
        ai_int = 2.0 / 3.0 + _airy_antiderivative_from_zero(t0, 0)
        bi_int = _airy_antiderivative_from_zero(t0, 2)
        return (a * ai_int + b * bi_int) / kap
    t0 = -kap * (region.hi + s)
    if b != 0.0:
        raise ContractError("Airy region with a Bi component cannot extend to x -> -inf")
    return a * (1.0 / 3.0 - _airy_antiderivative_from_zero(t0, 0)) / kap


def _trig_tail_check(region, cls):
    if region.kind != TRIG or not math.isinf(region.hi):
        raise ContractError(
            f"{cls.value} selection needs a sinusoidal tail region extending to +inf; "
            f"got kind={region.kind!r} on [{region.lo}, {region.hi}]"
        )


def selection_apply(cls: SelectionClass, wave: Waveform) -> float:
    """Selection integral of ``wave``; its zero marks a stationary quasibound state.

    Interior regions are integrated adaptively. The outer sinusoidal tail (or
    Airy tails, for the uniform field) is done in closed form. Singular
    ``x^{-1/2}`` weights at the origin are removed by the substitution x = t^2.
    """
    if not isinstance(wave, Waveform) or not wave.regions:
        raise ContractError("selection_apply needs a Waveform with at least one region")
    regions = list(wave.regions)
    if cls is SelectionClass.UNIFORM_FIELD:
        total = 0.0
        for reg in regions:
            if math.isinf(reg.lo) and math.isinf(reg.hi):
                raise ContractError("split a full-line region at a finite point before integrating")
            if math.isinf(reg.lo) or math.isinf(reg.hi):
                if reg.kind != AIRY:
                    raise ContractError("uniform-field waves need Airy-form tails")
                total += _airy_tail(reg, 1 if math.isinf(reg.hi) else -1)
            else:
                total += adaptive_quad(reg.value, reg.lo, reg.hi, SELECTION_QUAD)
        return float(total)

    if regions[0].lo != 0.0:
        raise ContractError("half-line waves must start at the origin")
    last = regions[-1]
    _trig_tail_check(last, cls)
    if last.lo == 0.0:
        # a single sinusoid on [0, inf): cut one wavelength out for quadrature
        k = last.coeffs[0]
        cut = 2 * math.pi / k
        regions = [Region(0.0, cut, TRIG, last.coeffs), Region(cut, math.inf, TRIG, last.coeffs)]
        last = regions[-1]

    total = 0.0
    for i, reg in enumerate(regions[:-1]):
        if cls is SelectionClass.SWAVE:
            if i == 0:
                # r = t^2: int u r^{-3/2} dr = int 2 u(t^2) / t^2 dt
                def fn(t, reg=reg):
                    return 2.0 * reg.value(t * t) / (t * t)
                total += adaptive_quad(fn, 0.0, math.sqrt(reg.hi), SELECTION_QUAD)
            else:
                total += adaptive_quad(lambda r, reg=reg: reg.value(r) * r ** -1.5, reg.lo, reg.hi, SELECTION_QUAD)
        else:
            if i == 0:
                # x = t^2: int psi'(x) x^{-1/2} dx = int 2 psi'(t^2) dt
                total += adaptive_quad(lambda t, reg=reg: 2.0 * reg.derivative(t * t), 0.0, math.sqrt(reg.hi),
                                       SELECTION_QUAD)
            else:
                total += adaptive_quad(lambda x, reg=reg: reg.derivative(x) / np.sqrt(x), reg.lo, reg.hi,
                                       SELECTION_QUAD)

    k, a, b = last.coeffs
    b0 = last.lo
    ct, st = half_power_tail(k, 0.0, b0)
    # integral of x^{-1/2} psi' over the tail, psi' = k (B cos - A sin)
    deriv_tail = k * (b * ct - a * st)
    if cls is SelectionClass.SWAVE:
        # int_b^inf r^{-3/2} u dr = 2 u(b)/sqrt(b) + 2 int_b^inf r^{-1/2} u' dr
        total += 2.0 * float(last.value(b0)) / math.sqrt(b0) + 2.0 * deriv_tail
    else:
        total += deriv_tail
    return float(total)


def cesaro_uniform_integral(fn, length, kap, energy_shift, x_source=0.0, n_avg=64):
    """Truncated full-line integral of ``fn`` averaged over one local oscillation period.

    Integrates over ``[-length, L']`` for ``L'`` spanning one local Airy period
    past ``length`` and returns the mean; the oscillating remainder averages
    out while the convergent part survives.
    """
    z = kap * (length + energy_shift)
    period = 2 * math.pi / (kap * math.sqrt(max(z, 1e-12)))
    spec = QuadratureSpec(rel_tol=1e-12, abs_tol=1e-14, max_depth=50)
    base = adaptive_quad(fn, -length, x_source, spec) + adaptive_quad(fn, x_source, length, spec)
    ends = np.linspace(length, length + period, n_avg + 1)
    partial = [0.0]
    for lo, hi in zip(ends[:-1], ends[1:]):
        partial.append(partial[-1] + adaptive_quad(fn, lo, hi, spec))
    partial = np.array(partial)
    # trapezoid mean of the running integral over one period
    mean_extra = (partial[:-1] + partial[1:]).sum() / (2 * n_avg)
    return base + mean_extra
