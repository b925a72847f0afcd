"""Reference-value regression suite.

Each criterion is a function returning a list of :class:`Check` rows; a
criterion passes when all its rows pass. The report contains no timings and
uses fixed formatting, so repeated runs are byte-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Dict, List

import numpy as np
from scipy import special

from . import greens, models, resonance, specfun, timeline

V0A2 = 72.0
A = 3.0
W = 0.5


@dataclass(frozen=True)
class Check:
    name: str
    measured: float
    expected: float
    tol: float
    mode: str = "abs"        # abs | rel | max (measured <= tol) | min (measured >= tol) | sig2

    def passed(self, tol_scale=1.0):
        tol = self.tol * tol_scale
        if self.mode == "abs":
            return abs(self.measured - self.expected) <= tol
        if self.mode == "rel":
            return abs(self.measured - self.expected) <= tol * abs(self.expected)
        if self.mode == "max":
            return self.measured <= tol
        if self.mode == "min":
            return self.measured >= self.tol / tol_scale if tol_scale else False
        if self.mode == "sig2":
            return _round_sig(self.measured, 2) == _round_sig(self.expected, 2)
        raise ValueError(self.mode)

    def line(self, tol_scale=1.0):
        flag = "PASS" if self.passed(tol_scale) else "FAIL"
        tol = self.tol * tol_scale if self.mode != "min" else self.tol / tol_scale
        return f"  {flag}  {self.name:<44s} measured={self.measured:.10g} expected={self.expected:.10g} " \
               f"tol={tol:.3g} ({self.mode})"


def _round_sig(x, n):
    if x == 0:
        return 0.0
    return round(x, n - 1 - int(math.floor(math.log10(abs(x)))))


def _leaky(w=W):
    return models.reference_well("leaky", V0A2, w, A)


def _twin(w=W, parity=1):
    return models.reference_well("twin", V0A2, w, A, parity)


def criterion_1() -> List[Check]:
    out = []
    for frac, expected, tol in ((0.1, 1.0955, 1e-4), (0.9, 0.46404, 1e-5)):
        spec = models.DeltaWellInField.at_fraction(-1.0, frac)
        root = models.delta_roots(spec)[0]
        out.append(Check(f"delta well |E/E_b| at F={frac}F_cr", root.energy / spec.eb, expected, tol, "rel"))
    return out


def criterion_2() -> List[Check]:
    spec = models.DeltaWellInField.at_fraction(-1.0, 1e-4)
    e = models.delta_roots(spec)[0].energy
    fracs = np.geomspace(1e-3, 1e-2, 6)
    shifts = [abs(models.delta_roots(models.DeltaWellInField.at_fraction(-1.0, f))[0].energy + 1.0)
              for f in fracs]
    slope = float(np.polyfit(np.log(fracs), np.log(shifts), 1)[0])
    return [
        Check("zero-force limit |E-E_b|/|E_b|", abs(e + 1.0), 0.0, 1e-6, "max"),
        Check("F^2 scaling exponent", slope, 2.0, 0.1, "abs"),
    ]


def criterion_3() -> List[Check]:
    roots = models.barrier_roots(_leaky())
    out = [Check("leaky well root count below V0", len(roots), 2, 0, "abs")]
    for i, exp in enumerate((1.067, 2.331)):
        got = roots[i].energy if i < len(roots) else math.nan
        out.append(Check(f"leaky well root {i + 1}", got, exp, 2e-3, "abs"))
    return out


def criterion_4() -> List[Check]:
    lc = models.leaky_cutoff(_leaky())
    tc = models.twin_cutoff(_twin())
    return [
        Check("leaky critical width estimate / a", lc.estimate_over_a, 0.394, 0.01, "rel"),
        Check("leaky critical width actual / a", lc.actual_over_a, 0.425, 0.01, "rel"),
        Check("twin even critical width estimate / a", tc.estimate_over_a, 0.480, 0.01, "rel"),
        Check("twin even critical width actual / a", tc.actual_over_a, 0.517, 0.01, "rel"),
    ]


def criterion_5() -> List[Check]:
    ka_o, v_o = models.thin_barrier_landmark(even=False)
    ka_e, v_e = models.thin_barrier_landmark(even=True)
    return [
        Check("odd landmark ka", ka_o, 4.2149, 5e-5, "abs"),
        Check("odd landmark value", v_o, -1 / 120, 0.05, "rel"),
        Check("even landmark ka", ka_e, 5.90, 5e-3, "abs"),
        Check("even landmark value", v_e, 1 / 248, 0.05, "rel"),
    ]


def criterion_6() -> List[Check]:
    even = models.barrier_roots(_twin())
    odd = models.barrier_roots(_twin(parity=-1))
    leaky = models.barrier_roots(_leaky())
    diff = max((abs(x.energy - y.energy) for x, y in zip(odd, leaky)), default=math.inf)
    if len(odd) != len(leaky):
        diff = math.inf
    return [
        Check("twin even root count", len(even), 1, 0, "abs"),
        Check("twin even root", even[0].energy if even else math.nan, 0.199, 2e-3, "abs"),
        Check("odd twin vs leaky max |dE|", diff, 0.0, 1e-12, "max"),
    ]


def criterion_7() -> List[Check]:
    out = []
    odd = resonance.resonance_scan(_leaky())
    even = resonance.resonance_scan(_twin())
    for label, poles, refs in (("odd", odd, (0.874, 3.444, 7.421)), ("even", even, (0.219, 1.955, 5.298))):
        out.append(Check(f"{label} pole count below V0", len(poles), 3, 0, "abs"))
        for i, ref in enumerate(refs):
            got = poles[i].e_r if i < len(poles) else math.nan
            out.append(Check(f"{label} pole E_r {i + 1}", got, ref, 1e-2, "abs"))
    out.append(Check("lowest odd pole E_i", odd[0].e_i if odd else math.nan, -0.718e-4, 0, "sig2"))
    return out


def _hi_series(z, terms=120):
    # Maclaurin series of Hi: (1/pi) sum 3^{(n-2)/3} Gamma((n+1)/3) z^n / n!
    total, zn, fact = 0.0, 1.0, 1.0
    for n in range(terms):
        if n:
            zn *= z
            fact *= n
        total += 3 ** ((n - 2) / 3) * math.gamma((n + 1) / 3) * zn / fact
    return total / math.pi


def _fd_residual(fn, x, h, pot):
    # max |psi'' - pot * psi| with the 5-point second-difference stencil
    x = np.asarray(x, dtype=float)
    f0 = fn(x)
    d2 = (-fn(x + 2 * h) + 16 * fn(x + h) - 30 * f0 + 16 * fn(x - h) - fn(x - 2 * h)) / (12 * h * h)
    return np.max(np.abs(d2 - pot(x) * f0))


def _fd_jump(fn, x0, h):
    # slope jump at x0 from second-order one-sided differences
    right = (-3 * fn(x0) + 4 * fn(x0 + h) - fn(x0 + 2 * h)) / (2 * h)
    left = (3 * fn(x0) - 4 * fn(x0 - h) + fn(x0 - 2 * h)) / (2 * h)
    return right - left


def criterion_8() -> List[Check]:
    rng = np.random.default_rng(20240611)
    out = []
    # special functions
    z = rng.uniform(-12, 8, 500)
    ai, aip, bi, bip = special.airy(z)
    wr = np.max(np.abs((ai * bip - aip * bi) * math.pi - 1.0))
    out.append(Check("Airy Wronskian rel error", float(wr), 0.0, 1e-12, "max"))
    zs = np.linspace(-3, 3, 25)
    err = 0.0
    for zz in zs:
        gi, hi = specfun.scorer(zz)
        b = special.airy(zz)[2]
        err = max(err, abs(gi + _hi_series(zz) - b) / abs(b))
    out.append(Check("Gi + Hi = Bi (Hi by series) rel", err, 0.0, 1e-11, "max"))
    out.append(Check("g(0)", specfun.fresnel_aux(0.0).g, 0.5, 0.0, "abs"))
    out.append(Check("h+ at z=200 vs -2i", abs(specfun.h_combo(-0.25, 200, 1).value + 2j), 0.0, 5e-2, "max"))
    out.append(Check("z h- at z=200 vs alpha+1/2", abs(200 * specfun.h_combo(0.25, 200, -1).value - 0.75), 0.0,
                     5e-2, "max"))

    # Green's functions: jump, homogeneous residual, selection annihilation
    m = 0.5
    jump_err = ode_err = sel_err = 0.0
    for _ in range(10):
        e, xs = rng.uniform(-2, 2), rng.uniform(-1, 1)
        f = rng.uniform(0.2, 2)
        g = lambda x: greens.green_uniform(e, x, xs, f, m)
        jump_err = max(jump_err, abs(_fd_jump(g, xs, 1e-4) - 2 * m) / (2 * m))
        xx = xs + np.linspace(0.5, 3, 6)
        ode_err = max(ode_err, _fd_residual(g, xx, 1e-3, lambda x: -2 * m * (e + f * x)))
        sel_err = max(sel_err, abs(greens.selection_apply(
            greens.SelectionClass.UNIFORM_FIELD,
            greens.Waveform(greens.green_uniform_regions(e, xs, f, m)))))
        en, rs = rng.uniform(0.3, 3), rng.uniform(0.3, 3)
        for par in (1, -1):
            regs = greens.green_free_regions(par, en, rs, m)
            w = greens.Waveform(regs)
            cls = greens.SelectionClass.FREE_EVEN if par > 0 else greens.SelectionClass.FREE_ODD
            sel_err = max(sel_err, abs(greens.selection_apply(cls, w)))
            jump = float(regs[1].derivative(rs) - regs[0].derivative(rs))
            jump_err = max(jump_err, abs(jump - m) / m)
        regs = greens.green_swave_regions(en, rs, m)
        sel_err = max(sel_err, abs(greens.selection_apply(greens.SelectionClass.SWAVE, greens.Waveform(regs))))
        gs = lambda r: greens.green_swave(en, r, rs, m)
        rr = rs + np.linspace(0.3, 2, 5)
        # u = r G obeys u'' + 2mE u = 0 away from the source
        ode_err = max(ode_err, _fd_residual(lambda r: r * gs(r), rr, 1e-3, lambda r: -2 * m * en))
        jump = _fd_jump(gs, rs, 1e-4)
        jump_err = max(jump_err, abs(jump - 2 * m / rs ** 2) / (2 * m / rs ** 2))
    out.append(Check("Green's jump condition rel", jump_err, 0.0, 1e-5, "max"))
    out.append(Check("Green's homogeneous ODE residual", float(ode_err), 0.0, 1e-6, "max"))
    out.append(Check("selection annihilates Green's functions", sel_err, 0.0, 1e-7, "max"))

    # timeline
    rep = rev = 0.0
    for _ in range(100):
        l = int(rng.integers(0, 3))
        tau, r = rng.uniform(0.1, 10), rng.uniform(0.1, 20)
        a = timeline.xi_spherical(l, tau, r, form="besselj")
        b = timeline.xi_spherical(l, tau, r, form="besselh")
        rep = max(rep, abs(a - b) / abs(b))
        rev = max(rev, abs(timeline.xi_spherical(l, -tau, r) - np.conj(b)))
        rev = max(rev, abs(timeline.xi_free(1, -tau, r) - np.conj(timeline.xi_free(1, tau, r))))
    out.append(Check("timeline BesselJ vs BesselH rel", rep, 0.0, 1e-9, "max"))
    out.append(Check("timeline time reversal", rev, 0.0, 0.0, "max"))

    # thick-barrier convergence
    r2 = thick_barrier_fit()[2]
    out.append(Check("thick-barrier log-gap linear fit R^2", r2, 0.95, 0.95, "min"))
    return out


def thick_barrier_fit(widths=(1.0, 1.5, 2.0, 2.5)):
    """Gap between the lowest leaky root and the closed-well level vs kappa*w.

    Returns ``(kappa_w, gaps, r_squared)``.
    """
    ref = models.bound_reference(_leaky())[0]
    kap = math.sqrt(2 * 0.5 * (V0A2 / A ** 2 - ref))
    kw, gaps = [], []
    for w in widths:
        e = models.barrier_roots(_leaky(w))[0].energy
        kw.append(kap * w * A)
        gaps.append(abs(e - ref))
    y = np.log(gaps)
    fit = np.polyfit(kw, y, 1)
    resid = y - np.polyval(fit, kw)
    r2 = 1 - float(np.sum(resid ** 2) / np.sum((y - y.mean()) ** 2))
    return np.array(kw), np.array(gaps), r2


CRITERIA: Dict[int, Callable[[], List[Check]]] = {
    1: criterion_1, 2: criterion_2, 3: criterion_3, 4: criterion_4,
    5: criterion_5, 6: criterion_6, 7: criterion_7, 8: criterion_8,
}

TITLES = {
    1: "delta well in a uniform field: reference energies",
    2: "zero-force limit and F^2 scaling",
    3: "leaky spherical well roots",
    4: "critical barrier widths",
    5: "thin-barrier landmark constants",
    6: "twin barriers: even root and odd/leaky identity",
    7: "S-matrix pole comparison",
    8: "property suites",
}


def run_criterion(n, tol_scale=1.0):
    checks = CRITERIA[n]()
    ok = all(c.passed(tol_scale) for c in checks)
    return ok, checks


def report(tol_scale=1.0, criteria=None):
    """Run the suite and return ``(all_passed, text)``."""
    lines = [f"regression suite (tolerance scale {tol_scale:g})"]
    all_ok = True
    for n in (criteria or sorted(CRITERIA)):
        ok, checks = run_criterion(n, tol_scale)
        all_ok &= ok
        lines.append(f"[{'PASS' if ok else 'FAIL'}] criterion {n}: {TITLES[n]}")
        lines.extend(c.line(tol_scale) for c in checks)
    lines.append(f"overall: {'PASS' if all_ok else 'FAIL'}")
    return all_ok, "\n".join(lines) + "\n"
