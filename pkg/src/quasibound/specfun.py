"""Special functions on the real axis: Airy, Scorer, Fresnel auxiliary, Dawson,
spherical and real-order Bessel functions, and the Hankel combinations h(alpha, z).

Airy, error, Dawson and Bessel values come from :mod:`scipy.special`. The
Scorer function Hi is evaluated here from its integral representation, and the
Fresnel auxiliary pair from the Faddeeva function, which avoids the
cancellation of the textbook ``1/2 - C`` / ``1/2 - S`` decomposition.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import DomainError, RangeError
from .solver import QuadratureSpec, adaptive_quad

AIRY_MAX_ARG = 100.0
SCORER_HI_MAX_ARG = 30.0

# integrand truncation for the Scorer integral: exp(-_TAIL_EXP) relative to the peak
_TAIL_EXP = 45.0
_HI_QUAD = QuadratureSpec(rel_tol=1e-14, abs_tol=1e-300, max_depth=60)


@dataclass(frozen=True)
class AiryPair:
    ai: float
    ai_prime: float
    bi: float
    bi_prime: float


@dataclass(frozen=True)
class FresnelAux:
    f: float
    g: float


@dataclass(frozen=True)
class HankelCombo:
    value: complex
    alpha: float
    kind: int


def airy(z: float) -> AiryPair:
    """Ai, Ai', Bi, Bi' at real ``z`` with ``|z| <= 100``."""
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"airy: argument must be finite, got {z!r}")
    if abs(z) > AIRY_MAX_ARG:
        raise RangeError(f"airy: |z| = {abs(z):g} exceeds {AIRY_MAX_ARG:g}; use airy_scaled")
    ai, aip, bi, bip = special.airy(z)
    return AiryPair(float(ai), float(aip), float(bi), float(bip))


def airy_scaled(z: float) -> AiryPair:
    """Exponentially scaled Airy functions (``scipy.special.airye`` convention).

    For ``z > 0`` Ai, Ai' are multiplied by ``exp(zeta)`` and Bi, Bi' by
    ``exp(-zeta)`` with ``zeta = 2/3 z**1.5``; for ``z <= 0`` the values are
    unscaled.
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"airy_scaled: argument must be finite, got {z!r}")
    ai, aip, bi, bip = special.airye(z)
    return AiryPair(float(ai), float(aip), float(bi), float(bip))


def _hi_integral(z):
    """(1/pi) * integral, scaled by exp(-2/3 z^1.5) when z > 0."""
    if z > 0:
        rz = math.sqrt(z)

        # t = sqrt(z) + s centres the Laplace peak at s = 0 with unit height
        def integrand(s):
            return np.exp(-rz * s * s - s ** 3 / 3.0)

        # upper cutoff where rz s^2 + s^3/3 = _TAIL_EXP
        hi = _cubic_cutoff(rz)
        lo = -rz
        zeta = 2.0 / 3.0 * z * rz
        if zeta > _TAIL_EXP:
            # left tail is negligible well before s = -sqrt(z)
            lo = -_cubic_cutoff_left(rz)
        val = adaptive_quad(integrand, lo, 0.0, _HI_QUAD) + adaptive_quad(integrand, 0.0, hi, _HI_QUAD)
        return val / math.pi
    x = -z

    def integrand(t):
        return np.exp(-t ** 3 / 3.0 - x * t)

    hi = _cubic_cutoff_linear(x)
    # breakpoint at the decay length keeps the first panel well resolved
    brk = min(hi, 1.0 / (1.0 + x))
    val = adaptive_quad(integrand, 0.0, brk, _HI_QUAD) + adaptive_quad(integrand, brk, hi, _HI_QUAD)
    return val / math.pi


def _cubic_cutoff(rz):
    # positive root of s^3/3 + rz s^2 = T by Newton from a safe start
    s = max((3 * _TAIL_EXP) ** (1 / 3), math.sqrt(_TAIL_EXP / max(rz, 1e-300)))
    for _ in range(100):
        f = s ** 3 / 3 + rz * s * s - _TAIL_EXP
        d = s * s + 2 * rz * s
        step = f / d
        s -= step
        if abs(step) < 1e-12 * s:
            break
    return s * 1.05


def _cubic_cutoff_left(rz):
    # u > 0 with rz u^2 - u^3/3 = T on the branch u < 2 rz
    u = math.sqrt(_TAIL_EXP / rz)
    for _ in range(100):
        f = rz * u * u - u ** 3 / 3 - _TAIL_EXP
        d = 2 * rz * u - u * u
        step = f / d
        u -= step
        if abs(step) < 1e-12 * u:
            break
    return min(u * 1.05, rz)


def _cubic_cutoff_linear(x):
    # t^3/3 + x t = T
    t = min((3 * _TAIL_EXP) ** (1 / 3), _TAIL_EXP / max(x, 1e-300))
    for _ in range(100):
        f = t ** 3 / 3 + x * t - _TAIL_EXP
        d = t * t + x
        step = f / d
        t -= step
        if abs(step) < 1e-13 * t:
            break
    return t * 1.05


def scorer_hi_scaled(z: float) -> float:
    """``Hi(z) * exp(-2/3 z**1.5)`` for ``z > 0`` and plain ``Hi(z)`` for ``z <= 0``.

    No overflow for any finite argument; pairs with :func:`airy_scaled` so that
    products like ``Hi(z) Ai(z)`` stay representable far into the z > 0 tail.
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"scorer: argument must be finite, got {z!r}")
    return _hi_integral(z)


def scorer(z: float) -> tuple[float, float]:
    """Scorer functions ``(Gi(z), Hi(z))`` for real ``z <= 30``.

    Hi comes from ``(1/pi) int_0^inf exp(-t^3/3 + z t) dt``; Gi is ``Bi - Hi``.
    """
    z = float(z)
    if not math.isfinite(z):
        raise DomainError(f"scorer: argument must be finite, got {z!r}")
    if z > SCORER_HI_MAX_ARG:
        raise RangeError(f"scorer: Hi grows super-exponentially; z = {z:g} exceeds {SCORER_HI_MAX_ARG:g}")
    if z < -AIRY_MAX_ARG:
        raise RangeError(f"scorer: z = {z:g} below {-AIRY_MAX_ARG:g} (Bi out of range)")
    hi = _hi_integral(z)
    if z > 0:
        hi *= math.exp(2.0 / 3.0 * z ** 1.5)
    bi = float(special.airy(z)[2])
    return bi - hi, hi


def fresnel_fg(z):
    """Vectorised Fresnel auxiliary functions ``(f, g)`` for ``z >= 0``.

    Uses ``g + i f = (1+i)/2 * w((1+i) sqrt(pi)/2 z)`` with the Faddeeva
    function ``w``; no subtractive cancellation at large ``z``.
    """
    z = np.asarray(z, dtype=float)
    v = 0.5 * (1 + 1j) * special.wofz(0.5 * math.sqrt(math.pi) * (1 + 1j) * z)
    return v.imag, v.real


def fresnel_aux(z: float) -> FresnelAux:
    """Fresnel auxiliary functions f(z), g(z) for ``z >= 0``."""
    z = float(z)
    if not z >= 0:
        raise DomainError(f"fresnel_aux: z must be >= 0, got {z!r}")
    if z == 0.0:
        return FresnelAux(0.5, 0.5)
    f, g = fresnel_fg(z)
    return FresnelAux(float(f), float(g))


def dawson_erf(x: float) -> tuple[float, float]:
    """``(erf(x), D(x))`` where ``D(x) = sqrt(pi)/2 exp(-x^2) erfi(x)`` is Dawson's integral."""
    x = float(x)
    if not math.isfinite(x):
        raise DomainError(f"dawson_erf: argument must be finite, got {x!r}")
    return float(special.erf(x)), float(special.dawsn(x))


def sph_bessel(l: int, x: float) -> tuple[float, float]:
    """Spherical Bessel functions ``(j_l(x), y_l(x))`` for ``0 <= l <= 25`` and ``x > 0``."""
    if int(l) != l or not 0 <= l <= 25:
        raise DomainError(f"sph_bessel: l must be an integer in [0, 25], got {l!r}")
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f"sph_bessel: x must be positive and finite, got {x!r}")
    l = int(l)
    if l == 0:
        return math.sin(x) / x, -math.cos(x) / x
    return float(special.spherical_jn(l, x)), float(special.spherical_yn(l, x))


def bessel_j_real_order(alpha: float, x: float) -> float:
    """Cylinder Bessel function J_alpha(x) for real ``alpha >= -1`` and ``x > 0``."""
    if not alpha >= -1:
        raise DomainError(f"bessel_j_real_order: alpha must be >= -1, got {alpha!r}")
    if not x > 0:
        raise DomainError(f"bessel_j_real_order: x must be > 0, got {x!r}")
    return float(special.jv(alpha, x))


def h_pm(alpha, z, kind):
    """Vectorised h-combination of Hankel functions (no domain checks)."""
    z = np.asarray(z, dtype=float)
    if kind > 0:
        hank, sgn = special.hankel1, 1.0
    else:
        hank, sgn = special.hankel2, -1.0
    phase = np.exp(-sgn * 1j * z + sgn * 1j * math.pi * (2 * alpha + 1) / 4)
    return np.sqrt(math.pi * z / 2) * phase * (hank(alpha + 1, z) - 1j * hank(alpha, z))


def h_combo(alpha: float, z: float, kind: int) -> HankelCombo:
    """``sqrt(pi z/2) exp(-+ i z +- i pi (2 alpha+1)/4) [H_{alpha+1} - i H_alpha](z)``.

    ``kind=+1`` uses Hankel functions of the first kind, ``kind=-1`` the second.
    For large z the ``+`` combination tends to ``-2i`` and ``z`` times the
    ``-`` combination tends to ``alpha + 1/2``.
    """
    if kind not in (1, -1):
        raise DomainError(f"h_combo: kind must be +1 or -1, got {kind!r}")
    if not alpha >= -0.75:
        raise DomainError(f"h_combo: alpha must be >= -3/4, got {alpha!r}")
    if not z > 0:
        raise DomainError(f"h_combo: z must be > 0 (branch cut on the negative axis), got {z!r}")
    return HankelCombo(complex(h_pm(alpha, z, kind)), float(alpha), kind)


def half_power_tail(k: float, phi: float, b: float) -> tuple[float, float]:
    """Exact tails ``int_b^inf x^{-1/2} cos(kx + phi) dx`` and the sine analogue.

    With ``zeta = sqrt(2 k b / pi)`` the shifted integrals are
    ``int_b^inf x^{-1/2} cos(k(x-b)) dx = sqrt(2 pi / k) g(zeta)`` and the same
    with sine and ``f(zeta)``; the phase ``k b + phi`` is then rotated in.
    """
    if not (k > 0 and b > 0):
        raise DomainError(f"half_power_tail: need k > 0 and b > 0, got k={k!r}, b={b!r}")
    f, g = fresnel_fg(math.sqrt(2 * k * b / math.pi))
    scale = math.sqrt(2 * math.pi / k)
    c_shift, s_shift = scale * float(g), scale * float(f)
    theta = k * b + phi
    ct, st = math.cos(theta), math.sin(theta)
    return c_shift * ct - s_shift * st, c_shift * st + s_shift * ct
