"""Shared numerical machinery: adaptive quadrature, bracketing and root refinement.

All routines are deterministic. Integrands passed to :func:`adaptive_quad` must
accept a numpy array of abscissae and return an array of the same shape.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, List

import numpy as np
from scipy.optimize import brentq

from .errors import ConvergenceError, EvaluationError

# Gauss-Kronrod 7/15 nodes and weights (QUADPACK qk15).
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

# full 15-point abscissae on [-1, 1] and matching weights
_NODES = np.concatenate([-_XGK[:-1], _XGK[::-1]])
_KW = np.concatenate([_WGK[:-1], _WGK[::-1]])
_GW = np.zeros(15)
_GW[[1, 3, 5]] = _WG[:3]
_GW[7] = _WG[3]
_GW[[9, 11, 13]] = _WG[2::-1]


@dataclass(frozen=True)
class QuadratureSpec:
    rel_tol: float = 1e-11
    abs_tol: float = 1e-14
    max_depth: int = 50

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("quadrature tolerances must be positive")
        if self.max_depth < 10:
            raise ValueError("max_depth must be at least 10")


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    f_lo: float
    f_hi: float

    @property
    def degenerate(self) -> bool:
        """True when a grid point hit an exact zero (``lo == hi``)."""
        return self.lo == self.hi


def _gk15(f, a, b):
    c = 0.5 * (a + b)
    h = 0.5 * (b - a)
    y = np.asarray(f(c + h * _NODES))
    kron = h * np.dot(_KW, y)
    gauss = h * np.dot(_GW, y)
    err = abs(kron - gauss)
    if not np.all(np.isfinite(y)):
        raise EvaluationError(f"integrand not finite on [{a!r}, {b!r}]", location=(a, b))
    return kron, err


def adaptive_quad(f: Callable, a: float, b: float, spec: QuadratureSpec = DEFAULT_QUAD):
    """Integrate ``f`` over ``[a, b]`` by globally adaptive Gauss-Kronrod 7/15.

    The interval with the largest error estimate is bisected until the summed
    error is below ``max(rel_tol * |I|, abs_tol)``. Works for real or complex
    valued integrands. An infinite upper limit is not supported; callers
    handle tails analytically.

    Raises
    ------
    ConvergenceError
        If an interval would have to be split beyond ``spec.max_depth``.
        ``trace`` carries the worst subinterval ``(lo, hi, err)``.
    """
    if b < a:
        raise ValueError("adaptive_quad requires a <= b")
    if a == b:
        return 0.0
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError("adaptive_quad needs finite limits")

    val, err = _gk15(f, a, b)
    heap = [(-err, 0, a, b, val, err)]
    total, total_err = val, err
    while True:
        tol = max(spec.rel_tol * abs(total), spec.abs_tol)
        if total_err <= tol:
            return total
        neg_err, depth, lo, hi, v, e = heapq.heappop(heap)
        if depth >= spec.max_depth:
            raise ConvergenceError(
                f"adaptive_quad: max_depth {spec.max_depth} exceeded; "
                f"worst subinterval [{lo!r}, {hi!r}] error {e:.3e}",
                trace=(lo, hi, e),
            )
        mid = 0.5 * (lo + hi)
        v1, e1 = _gk15(f, lo, mid)
        v2, e2 = _gk15(f, mid, hi)
        total += v1 + v2 - v
        total_err += e1 + e2 - e
        heapq.heappush(heap, (-e1, depth + 1, lo, mid, v1, e1))
        heapq.heappush(heap, (-e2, depth + 1, mid, hi, v2, e2))
        if total_err <= 0:
            # exact cancellation of error estimates: recompute sum from leaves
            total_err = sum(item[5] for item in heap)


def bracket_scan(f: Callable[[float], float], lo: float, hi: float, n: int) -> List[Bracket]:
    """All sign changes of ``f`` on a uniform ``n``-point grid over ``[lo, hi]``.

    Grid points where ``f`` is exactly zero come back as degenerate brackets
    (``lo == hi``). A root pair closer together than the grid spacing is
    invisible to the scan.
    """
    if n < 2:
        raise ValueError("bracket_scan needs n >= 2")
    xs = np.linspace(lo, hi, n)
    ys = np.empty(n)
    for i, x in enumerate(xs):
        y = f(float(x))
        if not math.isfinite(y):
            raise EvaluationError(f"f({x!r}) is not finite ({y!r})", location=float(x))
        ys[i] = y
    out = []
    for i in range(n):
        if ys[i] == 0.0:
            out.append(Bracket(float(xs[i]), float(xs[i]), 0.0, 0.0))
        elif i + 1 < n and ys[i + 1] != 0.0 and ys[i] * ys[i + 1] < 0:
            out.append(Bracket(float(xs[i]), float(xs[i + 1]), float(ys[i]), float(ys[i + 1])))
    return out


def refine_root(f: Callable[[float], float], bracket: Bracket, tol: float = 1e-14) -> float:
    """Refine a sign-change bracket to width ``tol`` (Brent's hybrid method).

    The returned abscissa always lies inside ``[bracket.lo, bracket.hi]``.
    """
    if bracket.degenerate:
        return bracket.lo
    root = brentq(f, bracket.lo, bracket.hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=500)
    return min(max(root, bracket.lo), bracket.hi)


def complex_secant(f: Callable[[complex], complex], z0: complex, z1: complex,
                   tol: float = 1e-10, maxiter: int = 100) -> complex:
    """Secant iteration for a zero of an analytic function of a complex variable.

    Stops when ``|f(z)| <= tol``. On failure raises :class:`ConvergenceError`
    with the list of ``(z, f(z))`` iterates in ``trace``.
    """
    if z0 == z1:
        raise ValueError("complex_secant needs two distinct starting points")
    f0, f1 = f(z0), f(z1)
    trace = [(z0, f0), (z1, f1)]
    for _ in range(maxiter):
        if abs(f1) <= tol:
            return z1
        denom = f1 - f0
        if denom == 0 or not np.isfinite(denom):
            break
        z2 = z1 - f1 * (z1 - z0) / denom
        if not np.isfinite(z2):
            break
        z0, f0 = z1, f1
        z1, f1 = z2, f(z2)
        trace.append((z1, f1))
    if abs(f1) <= tol:
        return z1
    raise ConvergenceError(
        f"complex_secant did not reach |f| <= {tol:g} in {maxiter} iterations "
        f"(last z={z1!r}, |f|={abs(f1):.3e})",
        trace=trace,
    )
