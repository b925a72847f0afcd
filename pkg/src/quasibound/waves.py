"""Piecewise closed-form waveforms.

A :class:`Waveform` is an ordered list of :class:`Region` objects, each holding
a closed-form expression (trigonometric, exponential or Airy). Interior
integrals over such waves are quadrature friendly, and the outermost regions
carry the analytic tails that the selection integrals need.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from scipy import special

TRIG = "trig"      # A cos(k x) + B sin(k x);                 coeffs (k, A, B)
EXP = "exp"        # A exp(-kap (x - x0)) + B exp(kap (x - x0)); coeffs (kap, x0, A, B)
AIRY = "airy"      # A Ai(-kap (x + s)) + B Bi(-kap (x + s));   coeffs (kap, s, A, B)


@dataclass(frozen=True)
class Region:
    lo: float
    hi: float
    kind: str
    coeffs: tuple

    def value(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == TRIG:
            k, a, b = self.coeffs
            return a * np.cos(k * x) + b * np.sin(k * x)
        if self.kind == EXP:
            kap, x0, a, b = self.coeffs
            return a * np.exp(-kap * (x - x0)) + b * np.exp(kap * (x - x0))
        if self.kind == AIRY:
            kap, s, a, b = self.coeffs
            ai, _, bi, _ = special.airy(-kap * (x + s))
            return a * ai + b * bi
        raise ValueError(f"unknown region kind {self.kind!r}")

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        if self.kind == TRIG:
            k, a, b = self.coeffs
            return k * (b * np.cos(k * x) - a * np.sin(k * x))
        if self.kind == EXP:
            kap, x0, a, b = self.coeffs
            return kap * (b * np.exp(kap * (x - x0)) - a * np.exp(-kap * (x - x0)))
        if self.kind == AIRY:
            kap, s, a, b = self.coeffs
            _, aip, _, bip = special.airy(-kap * (x + s))
            return -kap * (a * aip + b * bip)
        raise ValueError(f"unknown region kind {self.kind!r}")

    def contains(self, x):
        return (x >= self.lo) & (x <= self.hi)


@dataclass
class Waveform:
    """Sampled piecewise-analytic wave.

    ``regions`` must be contiguous and ordered. ``x``/``psi`` hold samples on
    the requested grid; ``envelope`` the matching reference bound-state wave,
    if one applies; ``potential`` the potential energy on the same grid.
    """

    regions: Sequence[Region]
    x: Optional[np.ndarray] = None
    psi: Optional[np.ndarray] = None
    envelope: Optional[np.ndarray] = None
    potential: Optional[np.ndarray] = None
    energy: Optional[float] = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.regions = tuple(self.regions)
        for left, right in zip(self.regions, self.regions[1:]):
            if left.hi != right.lo:
                raise ValueError("waveform regions must be contiguous")

    @property
    def breakpoints(self):
        return [r.hi for r in self.regions[:-1]]

    def _dispatch(self, x, method):
        x = np.asarray(x, dtype=float)
        out = np.full(x.shape, np.nan)
        for reg in self.regions:
            mask = reg.contains(x)
            if np.any(mask):
                out[mask] = getattr(reg, method)(x[mask])
        return out if out.ndim else float(out)

    def __call__(self, x):
        return self._dispatch(x, "value")

    def derivative(self, x):
        return self._dispatch(x, "derivative")

    def sample(self, grid):
        self.x = np.asarray(grid, dtype=float)
        self.psi = np.asarray(self(self.x))
        return self.psi

    def jumps(self):
        """Value and slope mismatch at each interior breakpoint."""
        out = []
        for left, right in zip(self.regions, self.regions[1:]):
            p = left.hi
            out.append((
                p,
                float(right.value(p) - left.value(p)),
                float(right.derivative(p) - left.derivative(p)),
            ))
        return out


def trig_through(x0: float, k: float, value: float, slope: float) -> tuple:
    """Coefficients (A, B) of ``A cos kx + B sin kx`` with given value and slope at ``x0``."""
    c, s = math.cos(k * x0), math.sin(k * x0)
    return value * c - slope / k * s, value * s + slope / k * c


def exp_through(x0: float, kap: float, value: float, slope: float) -> tuple:
    """Coefficients (A, B) of ``A e^{-kap(x-x0)} + B e^{kap(x-x0)}`` matching value and slope at ``x0``."""
    return 0.5 * (value - slope / kap), 0.5 * (value + slope / kap)
