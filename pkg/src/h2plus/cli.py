"""Command-line front end: ``h2plus {solve,scan,density,topology}``.

Exit codes: 0 success, 1 usage error, 2 numerical failure, 3 partial scan
failure.  Every emitted file starts with ``#`` metadata lines; output is a
pure function of the command line, so repeated runs are byte-identical.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np
from scipy.integrate import trapezoid

from . import __version__
from .angular import TruncationError
from .coords import DomainError, Geometry
from .density import (IllConditionedFit, axial_profile, classify_topology, eval_density,
                      midpoint_fit, solve_source, transition_brackets)
from .fd_oracle import StagnationError, default_grids, ground_energy
from .gaussian import BasisFormatError, EmptyBasisError, load_basis, variational_ground
from .separated import SolverError, solve_ground

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC, EXIT_PARTIAL = 0, 1, 2, 3
NUMERIC_ERRORS = (SolverError, TruncationError, StagnationError, EmptyBasisError,
                  IllConditionedFit, FloatingPointError)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(v) -> str:
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    return str(v)


def _round12(v):
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.12g}") if math.isfinite(v) else None
    return v


def threads() -> int:
    try:
        return max(1, int(os.environ.get("QAL_THREADS", "1")))
    except ValueError:
        return 1


def _map(fn, items):
    """Ordered map, parallel up to QAL_THREADS workers."""
    n = threads()
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))


def _header(command: str, args: argparse.Namespace, tolerances: dict) -> list[str]:
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return [
        f"# h2plus {__version__}",
        f"# command: {command}",
        "# config: " + " ".join(f"{k}={fmt(v)}" for k, v in config.items()),
        "# tolerances: " + " ".join(f"{k}={fmt(v)}" for k, v in sorted(tolerances.items())),
    ]


def _write_table(path, header, columns, rows, fmt_name="csv", trailer=(), extra=None):
    if fmt_name == "json":
        doc = {"metadata": header, "columns": columns,
               "rows": [[_round12(v) for v in r] for r in rows]}
        if extra:
            doc.update(extra)
        text = json.dumps(doc, indent=1) + "\n"
    else:
        lines = list(header) + [",".join(columns)]
        lines += [",".join(fmt(v) for v in r) for r in rows]
        lines += list(trailer)
        text = "\n".join(lines) + "\n"
    if path in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _r_values(rmin, rmax, steps, spacing):
    if rmin <= 0:
        raise UsageError("--rmin must be > 0")
    if steps < 1:
        raise UsageError("--steps must be >= 1")
    if steps == 1:
        return np.array([rmin])
    if rmax <= rmin:
        raise UsageError("--rmax must exceed --rmin when --steps > 1")
    return np.geomspace(rmin, rmax, steps) if spacing == "log" else np.linspace(rmin, rmax, steps)


def _source_spec(args):
    if args.solver == "variational":
        if not args.basis:
            raise UsageError("--solver variational requires --basis")
        return load_basis(args.basis)
    if args.solver != "exact":
        raise UsageError(f"--solver {args.solver} is not available for this command")
    return "exact"


# -- subcommands -------------------------------------------------------------------

def cmd_solve(args) -> int:
    if args.solver == "variational" and not args.basis:
        raise UsageError("--solver variational requires --basis")
    g = Geometry(args.R)
    tol = {"tol": args.tol}
    if args.solver == "exact":
        sol = solve_ground(args.R, args.tol)
        summary = {"R": sol.R, "E_elec": sol.E_elec, "E_tot": sol.E_tot, "A": sol.A, "p": sol.p,
                   "angular_residual": sol.residuals["angular"],
                   "radial_residual": float(sol.residuals["radial_match"]),
                   "l_max": sol.truncation["l_max"], "norm_const": sol.norm_const}
    elif args.solver == "variational":
        basis = load_basis(args.basis).relocated(args.R)
        vs = variational_ground(basis, g, args.tau)
        tol["tau"] = args.tau
        norms = vs.group_norms()
        summary = {"R": args.R, "E_elec": vs.E_var, "E_tot": vs.E_tot, "n_basis": len(basis),
                   "retained": vs.retained, "dropped": vs.dropped,
                   "overlap_condition": vs.condition,
                   "c_A": norms["A"], "c_B": norms["B"], "c_U": norms["U"]}
    else:
        res = ground_energy(args.R, default_grids(args.R, n0=args.grid))
        summary = {"R": args.R, "E_elec": res.E_extrapolated, "E_tot": res.E_tot,
                   "error_estimate": res.error_estimate}
        for est in res.estimates:
            summary[f"E_elec_n{est.spec.n_xi}"] = est.E_elec
    if not (args.format == "json" and not args.out):
        for k, v in summary.items():
            print(f"{k} = {fmt(v)}")
    if args.out or args.format == "json":
        header = _header("solve", args, tol)
        _write_table(args.out if args.out else "-", header, ["quantity", "value"],
                     list(summary.items()), args.format)
    return EXIT_OK


def _scan_row(R):
    try:
        sol = solve_ground(float(R))
        rep = classify_topology(axial_profile(sol, Geometry(float(R))))
        return [float(R), sol.E_elec, sol.E_tot, sol.A, sol.p, rep.cls.value], None
    except NUMERIC_ERRORS as exc:
        nan = float("nan")
        return [float(R), nan, nan, nan, nan, "FAILED"], f"R={fmt(float(R))}: {exc}"


def cmd_scan(args) -> int:
    Rs = _r_values(args.rmin, args.rmax, args.steps, args.spacing)
    results = _map(_scan_row, Rs)
    rows = [r for r, _ in results]
    errors = [e for _, e in results if e]
    header = _header("scan", args, {"tol": 1e-12})
    _write_table(args.out, header, ["R", "E_elec", "E_tot", "A", "p", "class"], rows, args.format)
    for e in errors:
        print(f"scan failure: {e}", file=sys.stderr)
    return EXIT_PARTIAL if errors else EXIT_OK


def meridian_grid(sol, half_width: float, nx: int, nz: int):
    """(x, z, rho) on a uniform grid of the y = 0 plane; rows ordered by z then x."""
    x = np.linspace(-half_width, half_width, nx)
    z = np.linspace(-half_width, half_width, nz)
    Z, X = np.meshgrid(z, x, indexing="ij")
    pts = np.stack([X, np.zeros_like(X), Z], axis=-1)
    return X, Z, eval_density(sol, Geometry(sol.R), pts)


def grid_integral(X, Z, rho) -> float:
    """Trapezoid integral of rho with revolution weight 2 pi |x| over the x >= 0 half."""
    x = X[0]
    keep = x >= 0
    xs = x[keep]
    inner = trapezoid(rho[:, keep] * 2 * np.pi * xs, xs, axis=1)
    return float(trapezoid(inner, Z[:, 0]))


def cmd_density(args) -> int:
    source = _source_spec(args)
    g = Geometry(args.R)
    sol = solve_source(source, args.R)
    X, Z, rho = meridian_grid(sol, args.half_width, args.nx, args.nz)
    header = _header("density", args, {"tol": 1e-12, "tau": 1e-10})
    rows = zip(X.ravel(), Z.ravel(), rho.ravel())
    _write_table(args.out, header, ["x", "z", "rho"], rows, args.format)
    n_axis = max(args.nz, 201) | 1
    prof = axial_profile(sol, g, max(args.half_width, 0.5 * args.R + 2.0), n_axis)
    axis_path = args.axis_out or (Path(args.out).with_name("axis.csv") if args.out else None)
    if axis_path is not None:
        _write_table(axis_path, header, ["z", "rho"], zip(prof.z, prof.rho), args.format)
    print(f"integral = {fmt(grid_integral(X, Z, rho))}", file=sys.stderr)
    return EXIT_OK


def _topology_row(source, window):
    def run(R):
        R = float(R)
        try:
            sol = solve_source(source, R)
            rep = classify_topology(axial_profile(sol, Geometry(R)))
            nan = float("nan")
            c1 = c2 = slope = nan
            if source == "exact" and sol.A > 0:
                fit = midpoint_fit(sol, window)
                c1, c2, slope = fit.c1, fit.c2, fit.slope
            return [R, rep.cls.value, rep.kappa0, c1, c2, slope], None
        except NUMERIC_ERRORS as exc:
            nan = float("nan")
            return [R, "FAILED", nan, nan, nan, nan], f"R={fmt(R)}: {exc}"
    return run


def cmd_topology(args) -> int:
    source = _source_spec(args)
    Rs = _r_values(args.rmin, args.rmax, args.steps, args.spacing)
    results = _map(_topology_row(source, args.window), Rs)
    rows = [r for r, _ in results]
    errors = [e for _, e in results if e]
    ok = [r for r in rows if r[1] != "FAILED"]
    brackets = transition_brackets(source, [r[0] for r in ok], [r[2] for r in ok], args.dR)
    trailer = [f"#transition,{fmt(lo)},{fmt(hi)}" for lo, hi in brackets]
    header = _header("topology", args, {"eps_rel": 1e-8, "eps_flat": 1e-4, "dR": args.dR})
    _write_table(args.out, header, ["R", "class", "kappa0", "c1", "c2", "slope"], rows,
                 args.format, trailer, {"transitions": [list(b) for b in brackets]})
    for e in errors:
        print(f"topology failure: {e}", file=sys.stderr)
    return EXIT_PARTIAL if errors else EXIT_OK


# -- parser --------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="h2plus", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"h2plus {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, solvers):
        sp.add_argument("--solver", choices=solvers, default="exact")
        sp.add_argument("--basis", help="basis file (required for --solver variational)")
        sp.add_argument("--tau", type=float, default=1e-10, help="overlap drop tolerance")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--out", help="output file (default: stdout)")

    s = sub.add_parser("solve", help="ground state at one separation")
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-12)
    s.add_argument("--grid", type=int, default=40, help="coarsest oracle grid (oracle solver)")
    common(s, ("exact", "variational", "oracle"))
    s.set_defaults(func=cmd_solve)

    def r_range(sp, spacing="lin"):
        sp.add_argument("--rmin", type=float, required=True)
        sp.add_argument("--rmax", type=float, required=True)
        sp.add_argument("--steps", type=int, required=True)
        sp.add_argument("--spacing", choices=("lin", "log"), default=spacing)

    s = sub.add_parser("scan", help="energy curve E(R) with exact-density topology")
    r_range(s)
    s.add_argument("--format", choices=("csv", "json"), default="csv")
    s.add_argument("--out")
    s.set_defaults(func=cmd_scan)

    s = sub.add_parser("density", help="meridian-plane density grid plus axial profile")
    s.add_argument("--R", type=float, required=True)
    s.add_argument("--nx", type=int, default=601)
    s.add_argument("--nz", type=int, default=601)
    s.add_argument("--half-width", type=float, default=5.0)
    s.add_argument("--axis-out", help="axial profile file (default: axis.csv next to --out)")
    common(s, ("exact", "variational"))
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("topology", help="axial topology classes and transitions over R")
    r_range(s)
    s.add_argument("--window", type=float, default=0.1, help="eta window of the midpoint fit")
    s.add_argument("--dR", type=float, default=1e-4, help="transition bracket width")
    common(s, ("exact", "variational"))
    s.set_defaults(func=cmd_topology)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # usage errors, --help and --version
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except (UsageError, BasisFormatError, DomainError, OSError) as exc:
        parser.print_usage(sys.stderr)
        print(f"h2plus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NUMERIC_ERRORS as exc:
        print(f"h2plus: numerical failure: {exc}", file=sys.stderr)
        for k, v in sorted(getattr(exc, "diagnostics", {}).items()):
            print(f"  {k} = {fmt(v)}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
