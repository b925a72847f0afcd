"""Command-line front end.

Commands: solve, scan, waveform, critical, resonances, timeline, greens and
regress. Parameters come from flags or a flat ``key=value`` config file;
flags win. Exit status is 0 on success, 2 for an invalid configuration and
3 when a numerical procedure fails to converge.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from . import greens, models, regression, resonance, timeline
from .errors import ConvergenceError, QuasiboundError

EXIT_OK, EXIT_CONFIG, EXIT_NOCONV = 0, 2, 3

COMMANDS = ("solve", "scan", "waveform", "critical", "resonances", "timeline", "greens")
MODELS = ("delta-field", "leaky-sphere", "twin-barrier")

DEFAULTS = {
    "model": "leaky-sphere", "V0a2": 72.0, "w": 0.5, "a": 3.0, "f_frac": 0.1, "eb": -1.0,
    "parity": None, "grid": None, "out": None, "format": None, "mass": 0.5, "index": 0,
    "family": "uniform", "tau": 1.0, "l": 0, "force": 1.0, "energy": 1.0, "source": 0.0,
    "tol_scale": 1.0,
}
FLOAT_KEYS = {"V0a2", "w", "a", "f_frac", "eb", "mass", "tau", "force", "energy", "source", "tol_scale"}
INT_KEYS = {"index", "l"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Grid:
    n: int
    lo: float
    hi: float

    @classmethod
    def parse(cls, text):
        try:
            n, lo, hi = text.split(",")
            grid = cls(int(n), float(lo), float(hi))
        except ValueError as exc:
            raise ConfigError(f"--grid expects N,min,max; got {text!r}") from exc
        if grid.n < 2 or not grid.lo < grid.hi:
            raise ConfigError(f"--grid must be strictly increasing with N >= 2; got {text!r}")
        return grid

    def points(self):
        return np.linspace(self.lo, self.hi, self.n)


@dataclass
class RunConfig:
    command: str
    model: models.ModelSpec
    params: dict
    grid: Optional[Grid]
    out: Optional[str]
    fmt: str
    units: models.PhysicalUnits
    extra: dict = field(default_factory=dict)


# --- configuration ---------------------------------------------------------

def read_config_file(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path!r}: {exc}") from exc
    for num, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{num}: expected key=value")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.lstrip("-").replace("-", "_")
        if key not in DEFAULTS:
            raise ConfigError(f"{path}:{num}: unknown key {key!r}")
        values[key] = val
    return values


def _coerce(key, val):
    if val is None:
        return None
    try:
        if key in FLOAT_KEYS:
            return float(val)
        if key in INT_KEYS:
            return int(val)
    except ValueError as exc:
        raise ConfigError(f"{key}: cannot parse {val!r}") from exc
    return val


def _build_model(p, units):
    name = p["model"]
    if name not in MODELS:
        raise ConfigError(f"unknown model {name!r}; choose from {', '.join(MODELS)}")
    try:
        if name == "delta-field":
            return models.DeltaWellInField.at_fraction(p["eb"], p["f_frac"], units)
        if p["a"] <= 0 or p["w"] <= 0 or p["V0a2"] <= 0:
            raise ConfigError("a, w and V0a2 must be positive")
        if name == "leaky-sphere":
            if p["parity"] not in (None, "odd"):
                raise ConfigError("leaky-sphere s-waves are odd; --parity even is not meaningful")
            return models.reference_well("leaky", p["V0a2"], p["w"], p["a"], units=units)
        parity = {"even": 1, "odd": -1, None: 1}.get(p["parity"])
        if parity is None:
            raise ConfigError(f"--parity must be even or odd, got {p['parity']!r}")
        return models.reference_well("twin", p["V0a2"], p["w"], p["a"], parity, units)
    except QuasiboundError as exc:
        raise ConfigError(str(exc)) from exc


def build_config(ns) -> RunConfig:
    file_vals = read_config_file(ns.config) if getattr(ns, "config", None) else {}
    p = dict(DEFAULTS)
    for key, val in file_vals.items():
        p[key] = _coerce(key, val)
    for key in DEFAULTS:
        val = getattr(ns, key, None)
        if val is not None:
            p[key] = val
    if not p["mass"] > 0:
        raise ConfigError("--mass must be positive")
    units = models.PhysicalUnits(mass=p["mass"])
    grid = p["grid"]
    if isinstance(grid, str):
        grid = Grid.parse(grid)
    fmt = p["format"] or ("json" if ns.command in ("solve", "critical", "resonances") else "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"--format must be csv or json, got {fmt!r}")
    out = p["out"]
    if out is not None:
        parent = os.path.dirname(os.path.abspath(out))
        if not os.path.isdir(parent) or not os.access(parent, os.W_OK):
            raise ConfigError(f"output directory {parent!r} is not writable")
    model = _build_model(p, units)
    return RunConfig(ns.command, model, p, grid, out, fmt, units)


# --- output ----------------------------------------------------------------

def _fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    if x is None:
        return "nan"
    return "%.17g" % float(x)


def to_csv(header: Sequence[str], rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, str) else _fmt(v) for v in row])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    return obj


def write_atomic(path, text):
    """Write ``text`` to ``path`` through a temp file in the same directory and a rename."""
    parent = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# --- commands --------------------------------------------------------------

def _model_params(cfg):
    spec, p = cfg.model, cfg.params
    if isinstance(spec, models.DeltaWellInField):
        return {"model": "delta-field", "eb": spec.eb, "f_frac": p["f_frac"], "force": spec.force,
                "strength": spec.strength}
    d = {"model": p["model"], "V0a2": p["V0a2"], "a": spec.a, "w_over_a": p["w"], "V0": spec.v0, "b": spec.b}
    if isinstance(spec, models.TwinBarrier):
        d["parity"] = "even" if spec.parity > 0 else "odd"
    return d


class Result:
    def __init__(self, data=None, header=None, rows=None):
        self.data, self.header, self.rows = data, header, rows


def cmd_solve(cfg):
    roots = models.solve(cfg.model)
    data = {"model": cfg.params["model"], "parameters": _model_params(cfg),
            "roots": [r.as_dict() for r in roots]}
    rows = [(r.index, r.energy, r.residual, r.bracket[0], r.bracket[1]) for r in roots]
    return Result(data, ["index", "E", "residual", "bracket_lo", "bracket_hi"], rows)


def cmd_scan(cfg):
    spec, p = cfg.model, cfg.params
    if isinstance(spec, models.DeltaWellInField):
        grid = cfg.grid.points() if cfg.grid else np.linspace(0.05, 0.95, 19)
        energies = [[r.energy for r in models.delta_roots(
            models.DeltaWellInField.at_fraction(p["eb"], float(f), cfg.units))] for f in grid]
        label = "f_frac"
    else:
        grid = cfg.grid.points() if cfg.grid else np.linspace(0.3, 1.5, 13)
        if np.any(grid <= 0):
            raise ConfigError("scan over w/a needs positive widths")
        energies = [[r.energy for r in models.solve(spec.with_width(float(w) * spec.a))] for w in grid]
        label = "w_over_a"
    width = max((len(e) for e in energies), default=0)
    header = ["parameter"] + [f"E_{i + 1}" for i in range(width)]
    rows = [[float(x)] + e + [math.nan] * (width - len(e)) for x, e in zip(grid, energies)]
    data = {"model": p["model"], "parameters": _model_params(cfg), "scan_parameter": label,
            "rows": [{"parameter": r[0], "E": [v for v in r[1:] if math.isfinite(v)]} for r in rows]}
    return Result(data, header, rows)


def cmd_waveform(cfg):
    roots = models.solve(cfg.model)
    idx = cfg.params["index"]
    if not 0 <= idx < len(roots):
        raise ConfigError(f"root index {idx} out of range ({len(roots)} roots)")
    grid = cfg.grid.points() if cfg.grid else None
    if isinstance(cfg.model, models.DeltaWellInField):
        wave = models.delta_waveform(roots[idx], cfg.model, grid)
    else:
        if grid is not None and np.any(grid < 0):
            raise ConfigError("barrier waveforms are sampled on x >= 0 (reflect for x < 0)")
        wave = models.model_waveform(roots[idx], cfg.model, grid)
    env = wave.envelope if wave.envelope is not None else np.full_like(wave.x, np.nan)
    rows = list(zip(wave.x, wave.psi, env, wave.potential))
    data = {"model": cfg.params["model"], "parameters": _model_params(cfg), "E": roots[idx].energy,
            "x": wave.x.tolist(), "psi": wave.psi.tolist(), "envelope": env.tolist(),
            "potential": wave.potential.tolist()}
    return Result(data, ["x", "psi", "envelope", "potential"], rows)


def cmd_critical(cfg):
    spec = cfg.model
    if isinstance(spec, models.DeltaWellInField):
        fcr = models.delta_critical_force(spec.eb, cfg.units.mass)
        data = {"model": "delta-field", "eb": spec.eb, "F_cr": fcr}
        return Result(data, ["quantity", "value"], [("F_cr", fcr)])
    cw = models.twin_cutoff(spec) if isinstance(spec, models.TwinBarrier) else models.leaky_cutoff(spec)
    data = {"model": cfg.params["model"], "parameters": _model_params(cfg), "length_unit": "a",
            "estimate": cw.estimate_over_a, "actual": cw.actual_over_a,
            "estimate_length": cw.estimate, "actual_length": cw.actual}
    if isinstance(spec, models.TwinBarrier):
        data["criterion"] = "second even root"
    return Result(data, ["quantity", "value"], [("estimate", cw.estimate_over_a), ("actual", cw.actual_over_a)])


def cmd_resonances(cfg):
    spec = cfg.model
    if isinstance(spec, models.DeltaWellInField):
        raise ConfigError("resonances need a piecewise-constant model (leaky-sphere or twin-barrier)")
    poles = resonance.resonance_scan(spec)
    roots = models.solve(spec)
    table = []
    for i in range(max(len(poles), len(roots))):
        p = poles[i] if i < len(poles) else None
        r = roots[i] if i < len(roots) else None
        table.append({"index": i, "pole_E_r": p.e_r if p else None, "pole_E_i": p.e_i if p else None,
                      "stationary_E": r.energy if r else None})
    data = {"model": cfg.params["model"], "parameters": _model_params(cfg),
            "poles": [p.as_dict() for p in poles], "stationary_roots": [r.as_dict() for r in roots],
            "comparison": table}
    rows = [(t["index"], t["pole_E_r"], t["pole_E_i"], t["stationary_E"]) for t in table]
    return Result(data, ["index", "pole_E_r", "pole_E_i", "stationary_E"], rows)


def cmd_timeline(cfg):
    p = cfg.params
    fam, tau, m = p["family"], p["tau"], cfg.units.mass
    grid = cfg.grid.points() if cfg.grid else np.linspace(0.1, 10, 200)
    if fam == "uniform":
        vals = timeline.xi_uniform(tau, grid, p["force"], m)
    elif fam == "spherical":
        vals = timeline.xi_spherical(p["l"], tau, grid, m)
    elif fam in ("free-even", "free-odd"):
        vals = timeline.xi_free(1 if fam == "free-even" else -1, tau, grid, m)
    else:
        raise ConfigError(f"unknown timeline family {fam!r}")
    vals = np.asarray(vals)
    rows = list(zip(grid, vals.real, vals.imag))
    data = {"family": fam, "tau": tau, "x": grid.tolist(), "re": vals.real.tolist(), "im": vals.imag.tolist()}
    return Result(data, ["x", "re", "im"], rows)


def cmd_greens(cfg):
    p = cfg.params
    fam, e, src, m = p["family"], p["energy"], p["source"], cfg.units.mass
    grid = cfg.grid.points() if cfg.grid else np.linspace(0.0, 10, 201)
    if fam == "uniform":
        vals = greens.green_uniform(e, grid, src, p["force"], m)
    elif fam == "swave":
        vals = greens.green_swave(e, grid, src, m)
    elif fam in ("free-even", "free-odd"):
        vals = greens.green_free(1 if fam == "free-even" else -1, e, grid, src, m)
    else:
        raise ConfigError(f"unknown Green's function family {fam!r}")
    vals = np.asarray(vals, dtype=float)
    data = {"family": fam, "energy": e, "source": src, "x": grid.tolist(), "G": vals.tolist()}
    return Result(data, ["x", "G"], list(zip(grid, vals)))


HANDLERS = {
    "solve": cmd_solve, "scan": cmd_scan, "waveform": cmd_waveform, "critical": cmd_critical,
    "resonances": cmd_resonances, "timeline": cmd_timeline, "greens": cmd_greens,
}


def run(cfg: RunConfig) -> int:
    """Execute one command and write its artifact; returns the exit status."""
    res = HANDLERS[cfg.command](cfg)
    if cfg.fmt == "json":
        payload = dict(res.data)
        payload["units"] = cfg.units.as_dict()
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n"
    else:
        text = to_csv(res.header, res.rows)
    if cfg.out:
        write_atomic(cfg.out, text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# --- argument parsing ------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", choices=MODELS)
    common.add_argument("--V0a2", type=float, help="barrier strength V0*a^2")
    common.add_argument("--w", type=float, help="barrier width in units of a")
    common.add_argument("--a", type=float, help="well radius / half-width")
    common.add_argument("--f-frac", dest="f_frac", type=float, help="force as a fraction of F_cr")
    common.add_argument("--eb", type=float, help="bound-state energy of the delta well (< 0)")
    common.add_argument("--parity", choices=("even", "odd"))
    common.add_argument("--grid", help="sampling grid N,min,max")
    common.add_argument("--out", help="output path (default: stdout)")
    common.add_argument("--format", choices=("csv", "json"))
    common.add_argument("--config", help="key=value file; flags override its values")
    common.add_argument("--mass", type=float, help="particle mass (default 0.5, i.e. 2m = 1)")
    common.add_argument("--index", type=int, help="root index for waveform")
    common.add_argument("--family", help="timeline: uniform|spherical|free-even|free-odd; "
                                         "greens: uniform|swave|free-even|free-odd")
    common.add_argument("--tau", type=float, help="system time for timeline")
    common.add_argument("--l", type=int, help="orbital index for the spherical timeline")
    common.add_argument("--force", type=float, help="force for uniform-field timeline/greens")
    common.add_argument("--energy", type=float, help="energy for greens")
    common.add_argument("--source", type=float, help="source point for greens")

    parser = _Parser(prog="quasibound", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    reg = sub.add_parser("regress", help="run the reference-value regression suite")
    reg.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0)
    reg.add_argument("--out")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    if ns.command == "regress":
        ok, text = regression.report(ns.tol_scale)
        if ns.out:
            write_atomic(ns.out, text)
        else:
            sys.stdout.write(text)
        return EXIT_OK if ok else 1
    try:
        cfg = build_config(ns)
        return run(cfg)
    except ConvergenceError as exc:
        print(f"quasibound {ns.command}: no convergence: {exc}", file=sys.stderr)
        return EXIT_NOCONV
    except (ConfigError, QuasiboundError, ValueError) as exc:
        print(f"quasibound {ns.command}: invalid configuration: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
