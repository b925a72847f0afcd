"""Complex-energy S-matrix poles for piecewise-constant potentials.

The regular interior solution (sin or cos at the origin) is carried through
each constant layer by its exact 2x2 propagator. A pole is a zero of the
outgoing-wave condition ``u'(b) - i k u(b)`` at the outer edge, with the
principal branch ``k = sqrt(2mE)``. Poles of decaying states lie in the
lower half E-plane.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import List

import numpy as np

from .errors import BranchError, ConvergenceError, DomainError, RegimeError
from .models import LeakySphericalWell, TwinBarrier
from .solver import complex_secant

POLE_TOL = 1e-10
POLE_POLISH_TOL = 1e-13


@dataclass(frozen=True)
class ComplexPole:
    e_r: float
    e_i: float
    residual: float
    parity: int

    @property
    def energy(self):
        return complex(self.e_r, self.e_i)

    @property
    def width(self):
        return -2.0 * self.e_i

    def as_dict(self):
        return {"E_r": self.e_r, "E_i": self.e_i, "residual": self.residual,
                "parity": "even" if self.parity > 0 else "odd"}


def _layers(spec):
    return [(spec.a, 0.0), (spec.b, spec.v0)]


def _parity_of(spec, parity):
    if isinstance(spec, LeakySphericalWell):
        if parity not in (None, -1):
            raise DomainError("s-waves vanish at the origin: only odd (parity -1) matching applies")
        return -1
    if isinstance(spec, TwinBarrier):
        return spec.parity if parity is None else parity
    raise DomainError(f"no matching determinant for {type(spec).__name__}")


def matching_determinant(energy, spec, parity=None, outgoing=True):
    """Outgoing-wave matching condition at complex ``energy``; zero at a pole.

    The value is divided by an entire scale (barrier cosh factors, zero-free
    near the real axis) so that its modulus is O(1) across the scan range. ``outgoing=False``
    imposes an incoming wave instead (the conjugate-pole condition).
    """
    energy = complex(energy)
    if energy.imag == 0.0 and energy.real <= 0.0:
        raise BranchError(f"E = {energy.real:g} on the branch cut of k = sqrt(2mE) (non-positive real axis)")
    parity = _parity_of(spec, parity)
    m2 = spec.units.two_m
    k = cmath.sqrt(m2 * energy)
    if parity < 0:
        u, du = 0.0 + 0j, 1.0 + 0j
    else:
        u, du = 1.0 + 0j, 0.0 + 0j
    x0, scale = 0.0, 1.0
    for x1, v in _layers(spec):
        d = x1 - x0
        q2 = m2 * (energy - v)
        q = cmath.sqrt(q2)
        c = cmath.cos(q * d)
        # sin(qd)/q and q sin(qd) are even in q, so the result is entire in E
        sq = d if q == 0 else cmath.sin(q * d) / q
        qs = q2 * sq
        u, du = c * u + sq * du, -qs * u + c * du
        if v > 0:
            scale *= cmath.cosh(cmath.sqrt(m2 * (v - energy)) * d)
        x0 = x1
    sign = 1j if outgoing else -1j
    vmax = max(v for _, v in _layers(spec))
    return (du - sign * k * u) / (scale * math.sqrt(m2 * vmax))


def pole_find(seed, spec, parity=None, maxiter=100):
    """Complex secant from ``seed`` to a pole of the matching determinant."""
    parity = _parity_of(spec, parity)
    seed = complex(seed)

    def fn(e):
        return matching_determinant(e, spec, parity)

    z1 = seed + 1e-7 * abs(seed) * (1 - 1j)
    try:
        root = complex_secant(fn, seed, z1, tol=POLE_POLISH_TOL, maxiter=maxiter)
    except ConvergenceError as exc:
        # polish tolerance may sit below the rounding floor; accept the looser contract
        best = min(exc.trace, key=lambda zf: abs(zf[1]))[0] if exc.trace else None
        if best is None or abs(fn(best)) > POLE_TOL:
            raise ConvergenceError(
                f"pole_find: no convergence from seed {seed} (parity {parity:+d}, V0={spec.v0:g}, "
                f"a={spec.a:g}, b={spec.b:g})", trace=exc.trace) from exc
        root = best
    res = abs(fn(root))
    if root.imag > 1e-12 * max(1.0, abs(root)):
        raise ConvergenceError(f"pole_find: converged to E = {root} in the upper half-plane", trace=[root])
    return ComplexPole(root.real, root.imag, res, parity)


def resonance_scan(spec, parity=None, e_max=None, n=4000):
    """Poles with ``0 < E_r < e_max`` seeded from real-axis minima of |determinant|."""
    parity = _parity_of(spec, parity)
    e_max = spec.v0 if e_max is None else e_max
    if e_max > spec.v0:
        raise RegimeError("resonance_scan compares poles below the barrier top only (e_max <= V0)")
    grid = np.linspace(0.0, e_max, n + 2)[1:-1]
    mag = np.array([abs(matching_determinant(e, spec, parity)) for e in grid])
    idx = [i for i in range(1, n - 1) if mag[i] < mag[i - 1] and mag[i] <= mag[i + 1]]
    poles: List[ComplexPole] = []
    for i in idx:
        try:
            p = pole_find(complex(grid[i], -1e-6 * grid[i]), spec, parity)
        except ConvergenceError:
            continue
        if not (0 < p.e_r < e_max):
            continue
        if any(abs(p.energy - q.energy) < 1e-6 for q in poles):
            continue
        poles.append(p)
    return sorted(poles, key=lambda p: p.e_r)
