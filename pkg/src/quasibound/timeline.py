"""Time-state (quantum history) waves for the uniform-field, spherical and
one-dimensional free continua, in units with hbar = 1.

These are verification objects: the selection rules used by :mod:`greens`
are their tau -> 0 limits, taken analytically. tau = 0 itself is rejected.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

import numpy as np
from scipy import special

from .errors import DomainError, SingularPointError
from .specfun import h_pm


class TimelineClass(Enum):
    UNIFORM_FIELD = "uniform-field"
    SPHERICAL = "spherical"
    FREE = "free"


@dataclass(frozen=True)
class TimeState:
    """A single time state: continuum class, system time and its parameters.

    ``l`` is the orbital index for the spherical class and ``parity`` (+1/-1)
    for the free class; ``force`` applies to the uniform field only.
    """

    cls: TimelineClass
    tau: float
    mass: float = 0.5
    force: float | None = None
    l: int | None = None
    parity: int | None = None

    def __call__(self, x):
        if self.cls is TimelineClass.UNIFORM_FIELD:
            return xi_uniform(self.tau, x, self.force, self.mass)
        if self.cls is TimelineClass.SPHERICAL:
            return xi_spherical(self.l, self.tau, x, self.mass)
        return xi_free(self.parity, self.tau, x, self.mass)


def xi_uniform(tau, x, force, mass=0.5):
    """Plane-wave time state of the uniform-field continuum.

    Modulus is ``sqrt(F / 2 pi)`` everywhere; phase ``F x tau - F^2 tau^3 / 6m``.
    """
    if not force > 0:
        raise DomainError(f"xi_uniform: force must be positive, got {force!r}")
    x = np.asarray(x, dtype=float)
    phase = force * x * tau - force ** 2 * tau ** 3 / (6.0 * mass)
    out = math.sqrt(force / (2 * math.pi)) * np.exp(1j * phase)
    return out if out.ndim else complex(out)


def _order(l):
    if int(l) != l or l < -1:
        raise DomainError(f"orbital index must be an integer >= -1, got {l!r}")
    return (l - 0.5) / 2.0


def _check_tau(tau):
    if tau == 0:
        raise SingularPointError("tau = 0 is a singular point of the time states")


def xi_spherical(l, tau, r, mass=0.5, form="besselh"):
    """Radial time state for orbital index ``l`` (``l = -1`` is the formal even case).

    ``form="besselj"`` evaluates the cylinder-Bessel representation and
    ``form="besselh"`` the h-combination representation; the two agree.
    Negative ``tau`` uses time reversal (complex conjugation).
    """
    _check_tau(tau)
    alpha = _order(l)
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise DomainError("xi_spherical: r must be positive")
    if tau < 0:
        return np.conj(xi_spherical(l, -tau, r, mass, form))
    z = mass / (4.0 * tau)
    arg = r * r * z
    if form == "besselj":
        out = (np.sqrt(4 * r / mass) * z ** 1.5
               * np.exp(1j * arg - 1j * math.pi * (2 * alpha + 1) / 4)
               * (special.jv(alpha + 1, arg) - 1j * special.jv(alpha, arg)))
    elif form == "besselh":
        out = np.sqrt(2.0 / (math.pi * mass * r)) * (
            z * np.exp(2j * arg - 1j * math.pi * (2 * alpha + 1) / 2) * h_pm(alpha, arg, 1)
            + z * h_pm(alpha, arg, -1)
        )
    else:
        raise ValueError(f"unknown representation {form!r}")
    return out if out.ndim else complex(out)


def xi_free(parity, tau, x, mass=0.5):
    """Even (``parity=+1``) or odd (``-1``) time state of the free particle on the line.

    Odd states use the h-combinations of order -1/4, even states order -3/4.
    ``x < 0`` follows from parity, ``tau < 0`` from time reversal.
    """
    if parity not in (1, -1):
        raise DomainError(f"xi_free: parity must be +1 or -1, got {parity!r}")
    _check_tau(tau)
    x = np.asarray(x, dtype=float)
    if tau < 0:
        return np.conj(xi_free(parity, -tau, x, mass))
    ax = np.abs(x)
    if np.any(ax == 0):
        raise DomainError("xi_free: x = 0 is not evaluated (h-combinations are singular there)")
    z = mass / (4.0 * tau)
    arg = ax * ax * z
    if parity < 0:
        alpha, shift = -0.25, -math.pi / 4
    else:
        alpha, shift = -0.75, math.pi / 4
    out = np.sqrt(ax / (math.pi * mass)) * (
        z * np.exp(2j * arg + 1j * shift) * h_pm(alpha, arg, 1) + z * h_pm(alpha, arg, -1)
    )
    if parity < 0:
        out = np.where(x < 0, -out, out)
    return out if out.ndim else complex(out)


def i_tau(tau, x, mass=0.5):
    """Running integral ``int_0^x`` of the even free time state, in closed form."""
    _check_tau(tau)
    if not tau > 0:
        raise DomainError("i_tau: tau must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise DomainError("i_tau: x must be >= 0")
    safe = np.where(x > 0, x, 1.0)
    z = mass / (4.0 * tau)
    arg = safe * safe * z
    out = np.sqrt(safe ** 3 / (math.pi * mass)) * (
        np.exp(2j * arg + 1j * math.pi / 4) * z * (h_pm(-0.75, arg, 1) - h_pm(0.25, arg, 1))
        + z * h_pm(-0.75, arg, -1)
        + z * h_pm(0.25, arg, -1)
    )
    out = np.where(x > 0, out, 0.0)
    return out if out.ndim else complex(out)
