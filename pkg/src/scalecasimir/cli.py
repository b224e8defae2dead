"""Command-line front end.

Subcommands::

    scalecasimir cutoff  --wavelet bump --kmax 3 --steps 7
    scalecasimir force   --wavelet nonanalytic --method remainder --smin 1.5 --smax 6 --steps 200
    scalecasimir energy  --wavelet exponential --method exact --smin 1 --smax 6 --steps 51
    scalecasimir verify  [--only NAME ...] [--list]

Exit codes: 0 success, 1 verification failure, 2 usage error, 3 numerical
failure.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from functools import lru_cache

import numpy as np

from . import __version__
from . import acceptance
from . import casimir as cs
from . import wavelets as wv
from .numerics import ConvergenceError, QuadratureSpec

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3
FLOAT_FMT = "%.12e"


class UsageError(Exception):
    pass


@dataclass
class CurveTable:
    columns: list[str]
    units: dict[str, str]
    rows: list[list] = field(default_factory=list)
    diagnostics: list[dict] = field(default_factory=list)


# ---------------------------------------------------------------------------
# Output
# ---------------------------------------------------------------------------

def _fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "1" if v else "0"
    return FLOAT_FMT % v


def _data_lines(table: CurveTable) -> list[str]:
    return [",".join(table.columns)] + [",".join(_fmt(v) for v in row) for row in table.rows]


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    when = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return when.strftime("%Y-%m-%dT%H:%M:%SZ")


def _manifest(args, table: CurveTable) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("handler", "command")}
    return {
        "command": args.command,
        "parameters": params,
        "family": params.get("wavelet"),
        "version": __version__,
        "tolerances": asdict(QuadratureSpec()) | {"mode_sum_rel_tol": 1e-12},
        "units": table.units,
        "timestamp": _timestamp(),
    }


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "value") and not isinstance(obj, (int, float, str)):
        return obj.value
    return obj


def render(args, table: CurveTable) -> str:
    lines = _data_lines(table)
    digest = hashlib.sha256("\n".join(lines).encode()).hexdigest()
    manifest = _jsonable(_manifest(args, table))
    if args.format == "json":
        manifest["data_sha256"] = digest
        rows = [[int(v) if isinstance(v, (bool, np.bool_)) else float(FLOAT_FMT % v) for v in r] for r in table.rows]
        doc = {"manifest": manifest, "columns": table.columns, "rows": rows}
        return json.dumps(doc, indent=1, sort_keys=False) + "\n"
    head = [f"# {k}: {json.dumps(v, sort_keys=True)}" for k, v in manifest.items()]
    head.append(f"# data-sha256: {digest}")
    return "\n".join(head + lines) + "\n"


def emit(args, table: CurveTable) -> None:
    text = render(args, table)
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    if table.diagnostics:
        if args.out and args.out != "-":
            with open(args.out + ".diagnostics.json", "w", encoding="utf-8") as fh:
                json.dump(table.diagnostics, fh, indent=1)
                fh.write("\n")
        for d in table.diagnostics:
            print(f"dropped point {d['point']}: {d['error']}", file=sys.stderr)


# ---------------------------------------------------------------------------
# Argument handling
# ---------------------------------------------------------------------------

def _family(text: str) -> wv.WaveletFamily:
    try:
        return wv.parse_family(text)
    except (ValueError, OSError) as exc:
        raise UsageError(str(exc)) from exc


def _grid(lo: float, hi: float, steps: int) -> np.ndarray:
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if hi < lo:
        raise UsageError("upper end of the range lies below the lower end")
    if steps == 1 or hi == lo:
        return np.array([lo], dtype=float)
    return np.linspace(lo, hi, steps)


def _length_scale(args) -> float:
    """Factor converting user lengths to absolute lengths."""
    if args.unit == "cutoff":
        if args.A <= 0:
            raise UsageError("--unit cutoff needs A > 0; use --unit absolute for A = 0")
        return args.A
    return 1.0


# ---------------------------------------------------------------------------
# Sweep workers (module level so they pickle)
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _cached_family(text: str) -> wv.WaveletFamily:
    return wv.parse_family(text)


def _force_point(job):
    family_text, s, A, bc, method, truncation, order = job
    fam = _cached_family(family_text)
    cfg = cs.CasimirConfig(s, A, bc=bc, method=method, truncation=truncation, series_order=order)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", cs.AsymptoticSeriesWarning)
        F, flagged = cs.force(cfg, fam, full_output=True)
    return F, flagged


def _energy_point(job):
    family_text, s, A, bc, method, truncation, order = job
    fam = _cached_family(family_text)
    cfg = cs.CasimirConfig(s, A, bc=bc, method=method, truncation=truncation, series_order=order)
    r = cs.rho_renormalized(cfg, fam)
    return r.rho0, r.bulk, r.rho, r.boundary_shift


_NUMERIC_ERRORS = (ConvergenceError, ArithmeticError, np.linalg.LinAlgError)


class _Guard:
    """Picklable wrapper returning numerical failures instead of raising."""

    def __init__(self, fn):
        self.fn = fn

    def __call__(self, job):
        try:
            return self.fn(job)
        except _NUMERIC_ERRORS as exc:
            return exc


def _run_jobs(fn, jobs, workers):
    """Evaluate jobs in order; failed points come back as exception objects."""
    guarded = _Guard(fn)
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(guarded, jobs))
    return [guarded(j) for j in jobs]


def _check_method(args, fam):
    if args.method == "exact" and fam.kind != wv.EXPONENTIAL:
        raise UsageError("--method exact is available only for the exponential family")
    if args.method in ("sum", "exact", "remainder") and args.A <= 0:
        raise UsageError(f"--method {args.method} needs A > 0")
    if args.method == "remainder" and args.truncation is not None:
        raise UsageError("--truncation applies to --method sum only")


def _sweep(args, fn):
    fam = _family(args.wavelet)
    _check_method(args, fam)
    L = _length_scale(args)
    s_user = _grid(args.smin, args.smax, args.steps)
    if s_user[0] <= 0:
        raise UsageError("separations must be positive")
    try:
        cs.CasimirConfig(float(s_user[0]) * L, args.A, bc=args.bc, method=args.method,
                         truncation=args.truncation, series_order=args.order)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    jobs = [(args.wavelet, float(s) * L, args.A, args.bc, args.method, args.truncation, args.order) for s in s_user]
    return fam, L, s_user, _run_jobs(fn, jobs, args.workers)


def run_force(args) -> CurveTable:
    fam, L, s_user, results = _sweep(args, _force_point)
    series = args.method == "series"
    cols = ["s", "F", "F_continuum", "correction"] + (["flagged"] if series else [])
    e_unit = "A^-4" if args.unit == "cutoff" else "length^-4"
    units = {"s": "A" if args.unit == "cutoff" else "length"} | {c: e_unit for c in cols[1:4]}
    if series:
        units["flagged"] = "1 = asymptotic series unreliable"
    table = CurveTable(cols, units)
    scale = L**4
    for s, res in zip(s_user, results):
        if isinstance(res, Exception) or not math.isfinite(res[0]):
            table.diagnostics.append({"point": {"s": float(s)}, "error": repr(res)})
            continue
        F, flagged = res
        Fc = cs.continuum_force(float(s) * L, args.bc)
        row = [float(s), F * scale, Fc * scale, (F - Fc) * scale]
        table.rows.append(row + ([bool(flagged)] if series else []))
    return table


def run_energy(args) -> CurveTable:
    if args.A <= 0:
        raise UsageError("energies need A > 0 (the bulk term diverges at A = 0)")
    fam, L, s_user, results = _sweep(args, _energy_point)
    dirichlet = args.bc == "dirichlet"
    cols = ["s", "rho0", "bulk", "rho"] + (["boundary_shift"] if dirichlet else [])
    e_unit = "A^-4" if args.unit == "cutoff" else "length^-4"
    units = {"s": "A" if args.unit == "cutoff" else "length"} | {c: e_unit for c in cols[1:]}
    table = CurveTable(cols, units)
    scale = L**4
    for s, res in zip(s_user, results):
        if isinstance(res, Exception) or not all(math.isfinite(v) for v in res):
            table.diagnostics.append({"point": {"s": float(s)}, "error": repr(res)})
            continue
        rho0, bulk, rho, shift = res
        row = [float(s), rho0 * scale, bulk * scale, rho * scale]
        table.rows.append(row + ([shift * scale] if dirichlet else []))
    return table


def run_cutoff(args) -> CurveTable:
    fam = _family(args.wavelet)
    if args.kmax < 0:
        raise UsageError("--kmax must be non-negative")
    k = _grid(0.0, args.kmax, args.steps)
    cols = ["k", "f_tilde", "w_tilde_momentum"]
    units = {"k": "1/A", "f_tilde": "1", "w_tilde_momentum": "A^(3/2)"}
    f = np.atleast_1d(wv.cutoff(fam, k))
    w = np.atleast_1d(wv.momentum_profile(fam, k))
    extra = None
    if args.position:
        rmax = args.rmax if args.rmax is not None else args.kmax
        r = _grid(0.0, rmax, args.steps)
        cols += ["r", "w_position"]
        units |= {"r": "A", "w_position": "A^(-3/2)"}
        extra = r, np.atleast_1d(wv.position_profile(fam, r))
    table = CurveTable(cols, units)
    for i in range(k.size):
        row = [float(k[i]), float(f[i]), float(w[i])]
        if extra is not None:
            row += [float(extra[0][i]), float(extra[1][i])]
        if all(math.isfinite(v) for v in row):
            table.rows.append(row)
        else:
            table.diagnostics.append({"point": {"k": float(k[i])}, "error": "non-finite value"})
    return table


def run_verify(args) -> int:
    if args.list:
        for c in acceptance.CRITERIA:
            print(f"{c.index:2d}  {c.name:26s} {c.title}")
        return EXIT_OK
    try:
        selected = [acceptance.get(n).name for n in (args.only or [])]
    except KeyError as exc:
        raise UsageError(exc.args[0]) from exc
    results = acceptance.run(selected or None)
    if args.format == "json":
        text = json.dumps([asdict(r) for r in results], indent=1) + "\n"
    else:
        text = acceptance.format_report(results) + "\n"
    if args.out and args.out != "-":
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if all(r.passed for r in results) else EXIT_VERIFY


# ---------------------------------------------------------------------------

def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output path (default: stdout)")


def _add_physics(p):
    p.add_argument("--wavelet", default="exponential",
                   help="hermitian:n=<int> | exponential | bump | nonanalytic | custom:<path>")
    p.add_argument("--A", type=float, default=1.0, help="scale cutoff")
    p.add_argument("--smin", type=float, default=1.0)
    p.add_argument("--smax", type=float, default=6.0)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--bc", choices=("periodic", "dirichlet"), default="periodic")
    p.add_argument("--method", choices=("sum", "series", "exact", "remainder"), default="sum")
    p.add_argument("--truncation", type=int, default=None, help="fixed number of modes for --method sum")
    p.add_argument("--order", type=int, default=3, help="highest series index m for --method series")
    p.add_argument("--unit", choices=("cutoff", "absolute"), default="cutoff")
    p.add_argument("--workers", type=int, default=1, help="parallel sweep workers")
    _add_output(p)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scalecasimir", description="Casimir force under a wavelet scale cutoff")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("cutoff", help="tabulate cutoff function and profiles")
    p.add_argument("--wavelet", default="exponential")
    p.add_argument("--kmax", type=float, default=5.0)
    p.add_argument("--steps", type=int, default=51)
    p.add_argument("--position", action="store_true", help="add the position-space profile")
    p.add_argument("--rmax", type=float, default=None)
    _add_output(p)
    p.set_defaults(handler=run_cutoff)

    p = sub.add_parser("force", help="force against plate separation")
    _add_physics(p)
    p.set_defaults(handler=run_force)

    p = sub.add_parser("energy", help="energy densities against plate separation")
    _add_physics(p)
    p.set_defaults(handler=run_energy)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--only", action="append", metavar="NAME", help="run only this criterion (repeatable)")
    p.add_argument("--list", action="store_true", help="list criterion names")
    _add_output(p)
    p.set_defaults(handler=run_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "verify":
            return run_verify(args)
        if getattr(args, "workers", 1) < 1:
            raise UsageError("--workers must be >= 1")
        table = args.handler(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if not table.rows:
        emit(args, table)
        print("numerical failure: no point could be evaluated", file=sys.stderr)
        return EXIT_NUMERIC
    emit(args, table)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
