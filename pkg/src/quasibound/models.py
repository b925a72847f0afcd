"""Worked examples: a delta well in a uniform field, a leaky spherical well
(s-waves) and twin rectangular barriers on the line.

Each model provides its implicit energy equation (a "defect" whose zeros are
stationary quasibound energies), a root search, critical parameters and the
assembled waveform. Energies are in units with hbar = 1 and the mass carried
by :class:`PhysicalUnits` (default ``2m = 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np
from scipy import special
from scipy.optimize import minimize_scalar

from .errors import DegenerateMatchingError, DomainError, RegimeError
from .greens import SelectionClass, green_uniform_regions, selection_apply
from .solver import Bracket, QuadratureSpec, adaptive_quad, bracket_scan, refine_root
from .specfun import airy_scaled, fresnel_fg, scorer, scorer_hi_scaled
from .waves import EXP, TRIG, Region, Waveform, exp_through, trig_through

BARRIER_QUAD = QuadratureSpec(rel_tol=1e-11, abs_tol=1e-300, max_depth=50)
THIN_BARRIER_THRESHOLD_ODD = 120.0
THIN_BARRIER_THRESHOLD_EVEN = 248.0


@dataclass(frozen=True)
class PhysicalUnits:
    hbar: float = 1.0
    mass: float = 0.5

    def __post_init__(self):
        if self.hbar != 1.0:
            raise DomainError("only hbar = 1 units are supported")
        if not self.mass > 0:
            raise DomainError("mass must be positive")

    @property
    def two_m(self):
        return 2.0 * self.mass

    def as_dict(self):
        return {"hbar": self.hbar, "mass": self.mass, "two_m": self.two_m}


DEFAULT_UNITS = PhysicalUnits()


@dataclass(frozen=True)
class DeltaWellInField:
    """Attractive delta well ``-strength * delta(x)`` in a uniform force ``force``."""

    strength: float
    force: float
    units: PhysicalUnits = DEFAULT_UNITS

    def __post_init__(self):
        if not (self.strength > 0 and self.force > 0):
            raise DomainError("delta well needs strength > 0 and force > 0")

    @classmethod
    def from_binding(cls, eb, force, units=DEFAULT_UNITS):
        if not eb < 0:
            raise DomainError("binding energy must be negative")
        return cls(math.sqrt(-2.0 * eb / units.mass), force, units)

    @classmethod
    def at_fraction(cls, eb, fraction, units=DEFAULT_UNITS):
        """Well with binding energy ``eb`` in a force ``fraction * F_cr``."""
        return cls.from_binding(eb, fraction * delta_critical_force(eb, units.mass), units)

    @property
    def eb(self):
        return -self.units.mass * self.strength ** 2 / 2.0

    @property
    def kappa(self):
        return (2 * self.units.mass * self.force) ** (1.0 / 3.0)


@dataclass(frozen=True)
class LeakySphericalWell:
    """Spherical shell barrier of height ``v0`` on ``a <= r <= b``."""

    v0: float
    a: float
    b: float
    units: PhysicalUnits = DEFAULT_UNITS

    def __post_init__(self):
        if not (self.v0 > 0 and self.a > 0 and self.b > self.a):
            raise DomainError("leaky well needs v0 > 0 and b > a > 0")

    @property
    def width(self):
        return self.b - self.a

    def with_width(self, w):
        return type(self)(self.v0, self.a, self.a + w, self.units)


@dataclass(frozen=True)
class TwinBarrier:
    """Barriers of height ``v0`` on ``a <= |x| <= b``; ``parity`` is +1 (even) or -1 (odd)."""

    v0: float
    a: float
    b: float
    parity: int = 1
    units: PhysicalUnits = DEFAULT_UNITS

    def __post_init__(self):
        if not (self.v0 > 0 and self.a > 0 and self.b > self.a):
            raise DomainError("twin barrier needs v0 > 0 and b > a > 0")
        if self.parity not in (1, -1):
            raise DomainError("parity must be +1 or -1")

    @property
    def width(self):
        return self.b - self.a

    def with_width(self, w):
        return type(self)(self.v0, self.a, self.a + w, self.parity, self.units)


ModelSpec = Union[DeltaWellInField, LeakySphericalWell, TwinBarrier]


def reference_well(kind="leaky", v0a2=72.0, w=0.5, a=3.0, parity=1, units=DEFAULT_UNITS):
    """Barrier model from ``V0 a^2`` and a width given in units of ``a``."""
    v0 = v0a2 / a ** 2
    if kind == "leaky":
        return LeakySphericalWell(v0, a, a * (1 + w), units)
    return TwinBarrier(v0, a, a * (1 + w), parity, units)


@dataclass
class EnergyRoot:
    energy: float
    bracket: Tuple[float, float]
    residual: float
    iterations: int
    index: int
    ka: Optional[float] = None

    def as_dict(self):
        d = {"E": self.energy, "residual": self.residual, "bracket": list(self.bracket), "index": self.index}
        if self.ka is not None:
            d["ka"] = self.ka
        return d


@dataclass(frozen=True)
class CriticalWidth:
    """Critical barrier width: thin-barrier estimate and the located value (lengths)."""

    estimate: float
    actual: float
    a: float

    @property
    def estimate_over_a(self):
        return self.estimate / self.a

    @property
    def actual_over_a(self):
        return self.actual / self.a


class _Counted:
    def __init__(self, fn):
        self.fn = fn
        self.calls = 0

    def __call__(self, x):
        self.calls += 1
        return self.fn(x)


# --- delta well in a uniform field -----------------------------------------

def _hi_ai(t):
    # Hi(t) Ai(t) without overflow for large positive t
    if t > 0:
        return scorer_hi_scaled(t) * airy_scaled(t).ai
    _, hi = scorer(t)
    return hi * float(special.airy(t)[0])


def delta_defect(energy, spec: DeltaWellInField):
    """``1 - 2 pi sqrt(-kappa E_b / F) Hi(-kappa E/F) Ai(-kappa E/F)``; zero at a quasibound energy."""
    kap, f = spec.kappa, spec.force
    t = -kap * energy / f
    return 1.0 - 2 * math.pi * math.sqrt(-kap * spec.eb / f) * _hi_ai(t)


def delta_critical_force(eb, mass=0.5):
    """Force at which the quasibound energy reaches zero."""
    if not eb < 0:
        raise DomainError("binding energy must be negative")
    _, hi0 = scorer(0.0)
    ai0 = float(special.airy(0.0)[0])
    return (2 * math.pi * hi0 * ai0) ** 3 * math.sqrt(2 * mass) * (-eb) ** 1.5


def delta_roots(spec: DeltaWellInField, n=400, depth=2.5):
    """Quasibound energies with ``E < 0`` from a scan over ``[depth * E_b, 0)``."""
    eb = spec.eb
    fn = _Counted(lambda e: delta_defect(e, spec))
    lo, hi = depth * eb, -1e-9 * abs(eb)
    roots = []
    for i, br in enumerate(bracket_scan(fn, lo, hi, n)):
        e = refine_root(fn, br, tol=1e-15 * abs(eb))
        roots.append(EnergyRoot(e, (br.lo, br.hi), abs(delta_defect(e, spec)), fn.calls, i))
    return roots


def delta_waveform(root: EnergyRoot, spec: DeltaWellInField, grid=None):
    """Waveform proportional to G_E(x, 0), scaled so psi(0) equals the bound-state peak."""
    m, lam = spec.units.mass, spec.strength
    peak = math.sqrt(m * lam)
    regions = green_uniform_regions(root.energy, 0.0, spec.force, m)
    g00 = float(regions[0].value(0.0))
    scale = peak / g00
    scaled = [Region(r.lo, r.hi, r.kind, r.coeffs[:2] + (scale * r.coeffs[2], scale * r.coeffs[3]))
              for r in regions]
    wave = Waveform(scaled, energy=root.energy, meta={"model": "delta-field"})
    if grid is None:
        grid = np.linspace(-4 / (m * lam), 4 / (m * lam), 801)
    grid = np.asarray(grid, dtype=float)
    wave.sample(grid)
    wave.envelope = peak * np.exp(-m * lam * np.abs(grid))
    wave.potential = -spec.force * grid
    return wave


# --- barrier integrals -----------------------------------------------------

def leaky_mixing(k, kap, a):
    """Mixing coefficient of the growing exponential in the barrier."""
    den = kap * math.sin(k * a) - k * math.cos(k * a)
    scale = abs(kap * math.sin(k * a)) + abs(k * math.cos(k * a))
    if abs(den) <= 1e-12 * scale:
        raise DegenerateMatchingError(
            "kappa sin(ka) = k cos(ka): ratio form of the barrier wave is singular; "
            "use the two-coefficient matching"
        )
    return math.exp(-2 * kap * a) * (kap * math.sin(k * a) + k * math.cos(k * a)) / den


def _g_exp_scaled(gamma, z, log_scale):
    """Primitive of d(gamma z^2) g(z) exp(gamma z^2), times exp(-log_scale)."""
    if math.isinf(z):
        return 0.0
    f, g = fresnel_fg(z)
    if gamma > 0:
        rg = math.sqrt(gamma)
        extra = special.dawsn(rg * z) / rg
    else:
        s = math.sqrt(-gamma)
        # erf(s z) replaced by -erfc(s z); the dropped constant cancels in differences
        extra = -0.5 * math.sqrt(math.pi) / s * special.erfcx(s * z)
    pref = 1.0 / (1.0 + math.pi ** 2 / (4 * gamma ** 2))
    return pref * math.exp(gamma * z * z - log_scale) * (float(g) - math.pi / (2 * gamma) * float(f) + extra)


def closed_g_exp_integral(gamma, z0, z1):
    """``int_{z0}^{z1} d(gamma z^2) g(z) exp(gamma z^2)`` in closed form.

    Real for real ``gamma``; the imaginary-argument error function is carried
    in Dawson-scaled form. ``z1 = inf`` is allowed for ``gamma < 0``.
    """
    if not (z0 >= 0 and z1 >= z0):
        raise DomainError("closed_g_exp_integral needs 0 <= z0 <= z1")
    if z0 == z1:
        return 0.0
    if math.isinf(z1) and gamma > 0:
        raise DomainError("integral diverges for gamma > 0 and z1 = inf")
    if abs(gamma) < 1e-14:
        if math.isinf(z1):
            raise DomainError("degenerate gamma with infinite upper limit is not supported")
        # d(gamma z^2) e^{gamma z^2} -> 2 gamma z dz to first order
        return 2 * gamma * adaptive_quad(lambda z: z * fresnel_fg(z)[1], z0, z1)
    return _g_exp_scaled(gamma, z1, 0.0) - _g_exp_scaled(gamma, z0, 0.0)


def barrier_integrals(k, kap, a, b, method="quad"):
    """``(int_a^b g e^{kap(a-r)} dr, int_a^b g e^{kap(r-a)} dr)`` with g at ``sqrt(2kr/pi)``.

    ``method="quad"`` integrates adaptively; ``method="closed"`` uses the
    closed-form primitive (cross-check path).
    """
    if method == "quad":
        def g_of(r):
            return fresnel_fg(np.sqrt(2 * k * r / math.pi))[1]
        dec = adaptive_quad(lambda r: g_of(r) * np.exp(kap * (a - r)), a, b, BARRIER_QUAD)
        grow = adaptive_quad(lambda r: g_of(r) * np.exp(kap * (r - a)), a, b, BARRIER_QUAD)
        return dec, grow
    if method != "closed":
        raise ValueError(f"unknown method {method!r}")
    za, zb = math.sqrt(2 * k * a / math.pi), math.sqrt(2 * k * b / math.pi)
    gamma = kap * math.pi / (2 * k)
    # dr = +-d(gamma z^2) / kap; exponent scales chosen so e^{gamma z^2 - L} = e^{+-kap(r-a)}
    grow = (_g_exp_scaled(gamma, zb, kap * a) - _g_exp_scaled(gamma, za, kap * a)) / kap
    dec = (_g_exp_scaled(-gamma, za, -kap * a) - _g_exp_scaled(-gamma, zb, -kap * a)) / kap
    return dec, grow


# --- defects for the barrier models ----------------------------------------

def _barrier_k(ka, spec):
    m = spec.units.mass
    k = ka / spec.a
    energy = k * k / (2 * m)
    if not ka > 0:
        raise DomainError("ka must be positive")
    if energy >= spec.v0:
        raise RegimeError(f"E = {energy:g} >= V0 = {spec.v0:g}: defect only valid below the barrier top")
    kap = math.sqrt(2 * m * spec.v0 - k * k)
    return k, kap


def _defect_terms(ka, spec, method):
    k, kap = _barrier_k(ka, spec)
    dec, grow = barrier_integrals(k, kap, spec.a, spec.b, method)
    c = 2 * spec.units.mass * spec.v0 / kap
    return k, kap, c * dec, c * grow


def leaky_defect(ka, spec, method="quad"):
    """s-wave defect for the leaky well; zeros in ``ka`` are quasibound states.

    Also the odd-parity defect of the twin barrier (the equations coincide).
    """
    k, kap, t_dec, t_grow = _defect_terms(ka, spec, method)
    s, c = math.sin(ka), math.cos(ka)
    return 1.0 + (kap / k * s - c) * t_dec + (kap / k * s + c) * t_grow


def twin_even_defect(ka, spec, method="quad"):
    """Even-parity defect for twin barriers."""
    k, kap, t_dec, t_grow = _defect_terms(ka, spec, method)
    s, c = math.sin(ka), math.cos(ka)
    return -1.0 + (kap / k * c + s) * t_dec + (kap / k * c - s) * t_grow


def twin_odd_defect(ka, spec, method="quad"):
    return leaky_defect(ka, spec, method)


def defect_for(spec):
    if isinstance(spec, LeakySphericalWell):
        return leaky_defect
    if isinstance(spec, TwinBarrier):
        return twin_even_defect if spec.parity > 0 else twin_odd_defect
    raise DomainError(f"no barrier defect for {type(spec).__name__}")


def _ka_grid(spec, n):
    ka_max = math.sqrt(2 * spec.units.mass * spec.v0) * spec.a
    return np.linspace(0.0, ka_max, n + 2)[1:-1]


def barrier_roots(spec, n=2000):
    """Quasibound states below the barrier top: uniform ka scan plus Brent refinement."""
    defect = defect_for(spec)
    fn = _Counted(lambda ka: defect(ka, spec))
    grid = _ka_grid(spec, n)
    m, a = spec.units.mass, spec.a
    ka_tol = 1e-12 * spec.v0 * m * a * a / grid[-1]
    roots = []
    for i, br in enumerate(bracket_scan(fn, grid[0], grid[-1], n)):
        ka = refine_root(fn, br, tol=ka_tol)
        e = (ka / a) ** 2 / (2 * m)
        ebr = ((br.lo / a) ** 2 / (2 * m), (br.hi / a) ** 2 / (2 * m))
        roots.append(EnergyRoot(e, ebr, abs(defect(ka, spec)), fn.calls, i, ka))
    return roots


def _matching_levels(spec, even, n=4000):
    m, a = spec.units.mass, spec.a

    def fn(ka):
        k = ka / a
        kap = math.sqrt(max(2 * m * spec.v0 - k * k, 0.0))
        if even:
            return kap * math.cos(ka) - k * math.sin(ka)
        return kap * math.sin(ka) + k * math.cos(ka)

    grid = _ka_grid(spec, n)
    out = []
    for br in bracket_scan(fn, grid[0], grid[-1], n):
        ka = refine_root(fn, br, tol=1e-15)
        out.append((ka / a) ** 2 / (2 * m))
    return out


def bound_reference(spec):
    """Bound levels of the closed well (infinitely thick barrier), ascending."""
    even = isinstance(spec, TwinBarrier) and spec.parity > 0
    return _matching_levels(spec, even)


# --- thin-barrier analysis and critical widths -----------------------------

def thin_barrier_profile(ka, even=False):
    """Bracketed thin-barrier function ``2 g(sqrt(2ka/pi)) sin(ka)/ka`` (cos for even)."""
    ka = np.asarray(ka, dtype=float)
    g = fresnel_fg(np.sqrt(2 * ka / math.pi))[1]
    trig = np.cos(ka) if even else np.sin(ka)
    return 2 * g * trig / ka


def thin_barrier_landmark(even=False):
    """First minimum (odd/s-wave) or first maximum past the first node (even) of the profile."""
    sign = -1.0 if even else 1.0
    grid = np.linspace(0.05, 4 * math.pi, 20001)
    vals = sign * thin_barrier_profile(grid, even)
    start = np.argmax(vals < 0) if even else 0     # even profile: skip the diverging lobe at 0
    for i in range(max(start, 1), len(grid) - 1):
        if vals[i] < vals[i - 1] and vals[i] <= vals[i + 1]:
            res = minimize_scalar(lambda x: sign * float(thin_barrier_profile(x, even)),
                                  bracket=(grid[i - 1], grid[i], grid[i + 1]), tol=1e-12)
            return float(res.x), float(thin_barrier_profile(res.x, even))
    raise RuntimeError("no interior extremum found")


def thin_barrier_estimate(v0, a, threshold, mass=0.5):
    """Width solving ``sqrt(2m V0 a^2) sinh(sqrt(2m V0 w^2)) = threshold``."""
    q = math.sqrt(2 * mass * v0)
    return math.asinh(threshold / (q * a)) / q


def _extreme_defect(spec, lo, hi, sign, n=300):
    """min over [lo, hi] of sign * defect, grid plus local refinement."""
    defect = defect_for(spec)
    grid = np.linspace(lo, hi, n)
    vals = np.array([sign * defect(x, spec) for x in grid])
    i = int(np.argmin(vals))
    best = vals[i]
    if 0 < i < n - 1:
        res = minimize_scalar(lambda x: sign * defect(x, spec), bracket=(grid[i - 1], grid[i], grid[i + 1]),
                              tol=1e-10)
        if res.fun < best and lo <= res.x <= hi:
            best = res.fun
    return best


def _has_any_root(spec):
    grid = _ka_grid(spec, 300)
    return _extreme_defect(spec, grid[0], grid[-1], 1.0) <= 0.0


def _has_second_root(spec):
    grid = _ka_grid(spec, 300)
    brs = bracket_scan(lambda ka: twin_even_defect(ka, spec), grid[0], grid[-1], 300)
    if len(brs) >= 2:
        return True
    if not brs:
        return False
    first = refine_root(lambda ka: twin_even_defect(ka, spec), brs[0], 1e-12)
    # beyond the first crossing the defect is negative; a second root needs a max >= 0
    return -_extreme_defect(spec, first + 1e-6, grid[-1], -1.0) >= 0.0


def _bisect_width(spec, predicate, w_lo, w_hi, tol):
    while not predicate(spec.with_width(w_hi)):
        w_lo, w_hi = w_hi, w_hi * 1.5
    while predicate(spec.with_width(w_lo)):
        w_hi, w_lo = w_lo, w_lo / 1.5
    while w_hi - w_lo > tol:
        mid = 0.5 * (w_lo + w_hi)
        if predicate(spec.with_width(mid)):
            w_hi = mid
        else:
            w_lo = mid
    return 0.5 * (w_lo + w_hi)


def leaky_cutoff(spec):
    """Critical width below which the leaky well has no quasibound state."""
    m = spec.units.mass
    est = thin_barrier_estimate(spec.v0, spec.a, THIN_BARRIER_THRESHOLD_ODD, m)
    actual = _bisect_width(spec, _has_any_root, 0.8 * est, 1.25 * est, 1e-4 * spec.a)
    return CriticalWidth(est, actual, spec.a)


def twin_cutoff(spec):
    """Critical width below which twin barriers hold at most one even quasibound state."""
    m = spec.units.mass
    even = TwinBarrier(spec.v0, spec.a, spec.b, 1, spec.units)
    est = thin_barrier_estimate(spec.v0, spec.a, THIN_BARRIER_THRESHOLD_EVEN, m)
    actual = _bisect_width(even, _has_second_root, 0.8 * est, 1.25 * est, 1e-4 * spec.a)
    return CriticalWidth(est, actual, spec.a)


# --- waveforms -------------------------------------------------------------

def model_waveform(root: EnergyRoot, spec, grid=None):
    """Piecewise waveform of a barrier-model quasibound state on the half axis.

    Interior standing wave of unit amplitude, barrier exponentials matched by
    value and slope at ``a`` (no ratio form, so no pole at kappa sin ka = k cos ka),
    exterior sinusoid matched at ``b``. The envelope is the closed-well bound
    state nearest in energy, scaled to the interior wave at the origin.
    """
    m, a, b = spec.units.mass, spec.a, spec.b
    even = isinstance(spec, TwinBarrier) and spec.parity > 0
    k = math.sqrt(2 * m * root.energy)
    kap = math.sqrt(2 * m * (spec.v0 - root.energy))
    if even:
        inner = Region(0.0, a, TRIG, (k, 1.0, 0.0))
    else:
        inner = Region(0.0, a, TRIG, (k, 0.0, 1.0))
    va, sa = float(inner.value(a)), float(inner.derivative(a))
    ca, cb = exp_through(a, kap, va, sa)
    barrier = Region(a, b, EXP, (kap, a, ca, cb))
    vb, sb = float(barrier.value(b)), float(barrier.derivative(b))
    outer = Region(b, math.inf, TRIG, (k,) + trig_through(b, k, vb, sb))
    wave = Waveform([inner, barrier, outer], energy=root.energy,
                    meta={"model": "twin-barrier" if isinstance(spec, TwinBarrier) else "leaky-sphere",
                          "parity": "even" if even else "odd"})
    if grid is None:
        grid = np.linspace(0.0, 2.5 * b, 801)
    grid = np.asarray(grid, dtype=float)
    wave.sample(grid)
    levels = bound_reference(spec)
    if levels:
        e_b = min(levels, key=lambda e: abs(e - root.energy))
        kb = math.sqrt(2 * m * e_b)
        kapb = math.sqrt(2 * m * (spec.v0 - e_b))
        if even:
            inside, edge, scale = np.cos(kb * grid), math.cos(kb * a), 1.0
        else:
            inside, edge, scale = np.sin(kb * grid), math.sin(kb * a), k / kb
        env = np.where(grid <= a, inside, edge * np.exp(-kapb * (grid - a)))
        wave.envelope = scale * env
        wave.meta["envelope_energy"] = e_b
    wave.potential = np.where((grid >= a) & (grid <= b), spec.v0, 0.0)
    return wave


def selection_class_for(spec):
    if isinstance(spec, LeakySphericalWell):
        return SelectionClass.SWAVE
    if isinstance(spec, TwinBarrier):
        return SelectionClass.FREE_EVEN if spec.parity > 0 else SelectionClass.FREE_ODD
    return SelectionClass.UNIFORM_FIELD


def solve(spec, n=None):
    """Quasibound roots for any model."""
    if isinstance(spec, DeltaWellInField):
        return delta_roots(spec) if n is None else delta_roots(spec, n)
    return barrier_roots(spec) if n is None else barrier_roots(spec, n)


def waveform(root, spec, grid=None):
    if isinstance(spec, DeltaWellInField):
        return delta_waveform(root, spec, grid)
    return model_waveform(root, spec, grid)
