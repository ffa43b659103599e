"""Command-line front end: profile runs, shooting sweeps, traveling-wave
portraits and PDE experiments, each emitting plain-text data files plus a
manifest that reproduces the run bit for bit.

Output conventions: curve files are whitespace-separated columns with a
single '#'-prefixed header line; result files carry one record per line as
key=value pairs; every value is printed with repr/%.17e so a rerun of the
manifest is byte-identical.  Exit codes: 0 success, 2 solver
nonconvergence, 3 invalid configuration, 4 internal numeric failure.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (ClassificationError, ConvergenceError, DomainError,
                     NumericError, SolverError)
from .params import make_rheology
from .profile import Geometry, OutcomeKind, integrate_to_event
from .shooting import continue_to_zero_delta, default_delta_schedule, to_physical
from .traveling import (SeparatrixBranch, TWState, classify_trajectory,
                        equilibrium_analysis, equilibrium_front,
                        front_coefficient, integrate_separatrix,
                        reconstruct_front)
from .pde import (DropShape, evolve, front_position, init_drop,
                  rescale_compare, uniform_grid)

_EXIT_SOLVER = 2
_EXIT_CONFIG = 3
_EXIT_NUMERIC = 4


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.exit(_EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return repr(float(v))   # shortest round-trip; also tames np.float64
    if isinstance(v, (list, tuple)):
        return ",".join(_fmt(x) for x in v)
    return str(v)


def _write_columns(path: Path, header: list[str], columns) -> None:
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w", newline="\n") as fh:
        fh.write("# " + " ".join(header) + "\n")
        for row in zip(*cols):
            fh.write(" ".join("%.17e" % v for v in row) + "\n")


def _write_records(path: Path, records: list[dict]) -> None:
    with open(path, "w", newline="\n") as fh:
        for rec in records:
            fh.write(" ".join(f"{k}={_fmt(v)}" for k, v in rec.items()) + "\n")


def _write_manifest(path: Path, command: str, config: dict) -> None:
    with open(path, "w", newline="\n") as fh:
        fh.write(f"command = {command}\n")
        fh.write(f"version = {__version__}\n")
        for k in sorted(config):
            fh.write(f"{k} = {_fmt(config[k])}\n")


def _geometry(name: str) -> Geometry:
    try:
        return Geometry(name)
    except ValueError:
        raise DomainError(f"geometry must be planar or radial, got {name!r}")


def _out_dir(args) -> Path:
    out = args.out or os.environ.get("FILMSPREAD_OUT") or "."
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _floats(text: str) -> list[float]:
    return [float(tok) for tok in text.split(",") if tok.strip()]


# ---------------------------------------------------------------- commands

def cmd_profile(args) -> int:
    r = make_rheology(args.lam)
    geom = _geometry(args.geometry)
    out = _out_dir(args)
    res = integrate_to_event(geom, args.gamma, r, delta=args.delta,
                             x_max=args.x_max, tol=args.tol, x0=args.x0,
                             keep_trace=True)
    rec = {"lambda": args.lam, "gamma": args.gamma, "geometry": geom.value,
           "delta": args.delta, "outcome": res.kind.value, "n_steps": res.n_steps}
    if res.kind is OutcomeKind.INTERFACE_HIT:
        rec.update(y=res.y, slope=res.slope, curvature=res.state.curv)
    elif res.kind is OutcomeKind.MINIMUM_TURN:
        rec.update(x_min=res.x_min, z_min=res.z_min)
    else:
        rec.update(x_stop=res.x_stop, z_stop=res.z_stop)
    _write_records(out / "profile_result.txt", [rec])
    tr = res.trace
    _write_columns(out / "profile_trace.dat", ["x", "z", "dz", "curv"],
                   [tr.x, tr.z, tr.dz, tr.curv])
    _write_manifest(out / "manifest.txt", "profile", _capture(args, _PROFILE_OPTS))
    return 0


def cmd_shoot(args) -> int:
    r = make_rheology(args.lam)
    geom = _geometry(args.geometry)
    out = _out_dir(args)
    thetas = _floats(args.theta)
    schedule = default_delta_schedule(args.levels)
    results, level_rows = [], []
    for th in thetas:
        res = continue_to_zero_delta(geom, r, th, schedule=schedule, tol=args.tol)
        phys = to_physical(res, r)
        results.append({
            "theta": th, "gamma": res.gamma_theta, "y": res.y_theta,
            "slope": res.slope, "slope_target": res.slope_target,
            "kappa": res.kappa, "extrap_err": res.extrapolation_error_estimate,
            "fitted_q": res.fitted_q, "eta_f": phys.eta_f, "mass": phys.mass,
            "beta": phys.beta,
        })
        for lv in res.levels:
            level_rows.append([th, lv.delta, lv.gamma, lv.y, lv.slope,
                               float(lv.iterations)])
    _write_records(out / "shoot_results.txt", results)
    _write_columns(out / "shoot_levels.dat",
                   ["theta", "delta", "gamma", "y", "slope", "iterations"],
                   list(zip(*level_rows)) if level_rows else [[]] * 6)
    _write_manifest(out / "manifest.txt", "shoot", _capture(args, _SHOOT_OPTS))
    return 0


def cmd_tw(args) -> int:
    r = make_rheology(args.lam)
    out = _out_dir(args)
    eq = equilibrium_analysis(r)
    _write_records(out / "tw_equilibrium.txt", [{
        "lambda": args.lam, "y_P": eq.y_P, "z_P": eq.z_P,
        "det": eq.det, "trace": eq.trace,
        "eig_unstable": eq.eigenvalues[0], "eig_stable": eq.eigenvalues[1],
        "C_front": front_coefficient(r), "p_front": r.p_front,
    }])
    for br in SeparatrixBranch:
        tr = integrate_separatrix(br, r, span=args.span)
        _write_columns(out / f"tw_separatrix_{br.name.lower()}.dat",
                       ["xi1", "x", "y", "z"], [tr.xi1, tr.x, tr.y, tr.z])
    fp = equilibrium_front(r, 0.1, 10.0)
    _write_columns(out / "tw_front_equilibrium.dat", ["xi", "f", "f_xi"],
                   [fp.xi, fp.f, fp.f_xi])
    rows = []
    for pair in _floats_pairs(args.seeds):
        y0, z0 = pair
        cls = classify_trajectory(TWState(1.0, y0, z0), r)
        rows.append({"y0": y0, "z0": z0, "label": cls.label.value,
                     "from_family": cls.from_family.name,
                     "to_family": cls.to_family.name,
                     "behavior": str(cls.front_behavior),
                     "dewetting": cls.dewetting})
    if rows:
        _write_records(out / "tw_classification.txt", rows)
    _write_manifest(out / "manifest.txt", "tw", _capture(args, _TW_OPTS))
    return 0


def _floats_pairs(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        a, b = chunk.split(",")
        pairs.append((float(a), float(b)))
    return pairs


def cmd_evolve(args) -> int:
    r = make_rheology(args.lam)
    out = _out_dir(args)
    grid = uniform_grid(args.domain[0], args.domain[1], args.nodes)
    profile = None
    if args.shape == "selfsim" or args.compare:
        res = continue_to_zero_delta(Geometry.PLANAR, r, 0.0)
        profile = to_physical(res, r)
    shape = DropShape(args.shape)
    mass = args.mass
    if mass is None and profile is not None and shape is not DropShape.SELF_SIMILAR_SNAPSHOT:
        mass = profile.physical_mass
    support = tuple(args.support) if args.support else (-1.0, 1.0)
    t_init = args.t_init
    if shape is DropShape.SELF_SIMILAR_SNAPSHOT and t_init <= 0.0:
        t_init = 1.0     # a snapshot needs a positive similarity age
    field = init_drop(shape, mass, support, grid, profile=profile, t0=t_init)
    if shape is not DropShape.SELF_SIMILAR_SNAPSHOT:
        field.t = t_init

    fronts = []

    def observer(f):
        xf = front_position(f, r)
        fronts.append((f.t, xf if xf is not None else math.nan, f.mass,
                       f.clip_ledger))

    final = evolve(field, r, args.t_final, mobility=args.mobility,
                   c_safe=args.c_safe, observer=observer,
                   observe_every=args.observe_every)
    observer(final)
    _write_columns(out / "evolve_final.dat", ["x", "u"], [final.x, final.u])
    cols = list(zip(*fronts))
    _write_columns(out / "evolve_fronts.dat",
                   ["t", "x_front", "mass", "clip_ledger"], cols)
    rec = {"lambda": args.lam, "shape": args.shape, "t_final": final.t,
           "mass0": field.mass, "mass": final.mass,
           "clip_ledger": final.clip_ledger,
           "mass_closure": abs(final.mass - final.clip_ledger - field.mass)}
    if profile is not None:
        rep = rescale_compare(final, r, profile)
        rec.update(l_inf=rep.l_inf, l1=rep.l1,
                   front_ratio=rep.front_ratio if rep.front_ratio is not None else math.nan,
                   no_front=rep.no_front)
    _write_records(out / "evolve_report.txt", [rec])
    _write_manifest(out / "manifest.txt", "evolve", _capture(args, _EVOLVE_OPTS))
    return 0


# ------------------------------------------------------- option definitions

# (flag, dest, type, default, help)
_COMMON = [
    ("--lambda", "lam", float, 2.0, "rheology exponent lambda > 0"),
    ("--out", "out", str, None, "output directory (default $FILMSPREAD_OUT or .)"),
    ("--config", "config", str, None, "key = value config file, overridden by flags"),
]
_PROFILE_OPTS = _COMMON + [
    ("--gamma", "gamma", float, 0.0, "shooting parameter"),
    ("--geometry", "geometry", str, "planar", "planar or radial"),
    ("--delta", "delta", float, 1e-6, "working level z = delta"),
    ("--x-max", "x_max", float, None, "abscissa cap (default 4 B(gamma))"),
    ("--tol", "tol", float, 1e-10, "integration/event tolerance"),
    ("--x0", "x0", float, 1e-4, "series start abscissa"),
]
_SHOOT_OPTS = _COMMON + [
    ("--geometry", "geometry", str, "planar", "planar or radial"),
    ("--theta", "theta", str, "0.0", "comma-separated contact-angle fractions"),
    ("--levels", "levels", int, 17, "number of delta levels 10^(-2-j/2)"),
    ("--tol", "tol", float, 1e-10, "bisection tolerance in gamma"),
]
_TW_OPTS = _COMMON + [
    ("--span", "span", float, 1e4, "phase-plane escape cap on |y|, |z|"),
    ("--seeds", "seeds", str, "", "classification seeds 'y,z;y,z;...'"),
]
_EVOLVE_OPTS = _COMMON + [
    ("--shape", "shape", str, "rectangle", "parabola, rectangle or selfsim"),
    ("--mass", "mass", float, None, "drop mass (default: similarity mass if --compare)"),
    ("--support", "support", float, None, "drop support a b", 2),
    ("--domain", "domain", float, (-30.0, 30.0), "grid extent a b", 2),
    ("--nodes", "nodes", int, 801, "grid nodes"),
    ("--t-init", "t_init", float, 0.0, "initial clock value (snapshot age for selfsim)"),
    ("--t-final", "t_final", float, 10.0, "final time"),
    ("--mobility", "mobility", str, "mean", "face mobility rule: mean, min, harmonic"),
    ("--c-safe", "c_safe", float, 0.1, "stability safety factor"),
    ("--observe-every", "observe_every", int, 2000, "steps between front samples"),
    ("--compare", "compare", bool, False, "compare against the theta=0 similarity profile"),
]

_COMMANDS = {
    "profile": (_PROFILE_OPTS, cmd_profile),
    "shoot": (_SHOOT_OPTS, cmd_shoot),
    "tw": (_TW_OPTS, cmd_tw),
    "evolve": (_EVOLVE_OPTS, cmd_evolve),
}


def _add_options(parser: argparse.ArgumentParser, opts) -> None:
    for opt in opts:
        flag, dest, typ, default, helptext = opt[:5]
        nargs = opt[5] if len(opt) > 5 else None
        kw = {"dest": dest, "help": helptext, "default": None}
        if typ is bool:
            kw["action"] = "store_true"
            kw["default"] = None
        else:
            kw["type"] = typ
            if nargs:
                kw["nargs"] = nargs
        parser.add_argument(flag, **kw)


def _read_config(path: str) -> dict:
    values = {}
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DomainError(f"config line without '=': {line!r}")
        key, _, val = line.partition("=")
        values[key.strip()] = val.strip()
    return values


def _coerce(raw: str, typ, nargs):
    if typ is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    if nargs:
        return [typ(tok) for tok in raw.replace(",", " ").split()]
    return typ(raw)


def _resolve(args, opts) -> None:
    """Fill argparse results from config file and defaults (flags win)."""
    cfg = _read_config(args.config) if getattr(args, "config", None) else {}
    for opt in opts:
        flag, dest, typ, default = opt[:4]
        nargs = opt[5] if len(opt) > 5 else None
        if getattr(args, dest) is None:
            key = dest
            if key in cfg:
                setattr(args, dest, _coerce(cfg[key], typ, nargs))
            else:
                setattr(args, dest, default)


def _capture(args, opts) -> dict:
    skip = {"out", "config"}
    return {dest: getattr(args, dest) for _, dest, *_ in opts
            if dest not in skip and getattr(args, dest) is not None}


def cmd_rerun(args) -> int:
    manifest = _read_config(args.manifest)
    command = manifest.pop("command", None)
    manifest.pop("version", None)
    if command not in _COMMANDS:
        raise DomainError(f"manifest has no runnable command, got {command!r}")
    opts, fn = _COMMANDS[command]
    ns = argparse.Namespace()
    for opt in opts:
        _, dest, typ, default = opt[:4]
        nargs = opt[5] if len(opt) > 5 else None
        if dest in manifest:
            setattr(ns, dest, _coerce(manifest[dest], typ, nargs))
        else:
            setattr(ns, dest, default)
    ns.out = args.out
    ns.config = None
    return fn(ns)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="filmspread",
                     description="Self-similar spreading of power-law thin films")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    for name, (opts, _) in _COMMANDS.items():
        _add_options(sub.add_parser(name), opts)
    p = sub.add_parser("rerun")
    p.add_argument("manifest", help="manifest.txt of a previous run")
    p.add_argument("--out", dest="out", default=None)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "rerun":
            return cmd_rerun(args)
        opts, fn = _COMMANDS[args.command]
        _resolve(args, opts)
        return fn(args)
    except DomainError as exc:
        print(f"filmspread: invalid configuration: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except (ConvergenceError, SolverError, ClassificationError) as exc:
        print(f"filmspread: solver failure: {exc}", file=sys.stderr)
        return _EXIT_SOLVER
    except (NumericError, FloatingPointError) as exc:
        print(f"filmspread: numeric failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
