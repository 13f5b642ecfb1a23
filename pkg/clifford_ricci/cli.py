#!/usr/bin/env python3
"""
Command line entry point: python -m clifford_ricci <subcommand> [flags]

Exit codes: 0 every verdict passes, 1 a verdict fails, 2 usage or domain error.
"""
import argparse
import json
import logging
import math
import sys
import time
from pathlib import Path

import numpy as np
import pandas as pd

from . import export
from .conformal_profile import make_bump, profile, profile_table, verify_conditions
from .curvature import max_feasible_r, ricci_table, scan_nonnegativity
from .errors import CliffordError, InputFileError, NonConvergenceError
from .moebius_balance import balance, clifford_problem, shifted_problem
from .settings import (
    DEFAULT_BACKEND,
    DEFAULT_BISECTION_TOL,
    DEFAULT_GRID_N,
    DEFAULT_R,
    DEFAULT_SCAN_N,
    LOG_LEVEL,
    OUTPUT_DIR,
    Tolerances,
)
from .spectral import BACKENDS, TorusGrid, jacobi_spectrum
from .surface_geometry import torus_table, willmore_pairs
from .verifier import emit_report, to_jsonable, verify_example, willmore_times

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


def _common() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=float, default=DEFAULT_R, help="bump half-width, 0 < r < pi/8")
    common.add_argument("--n", type=int, default=None, help="grid size (torus grid or t-scan)")
    common.add_argument("--backend", choices=BACKENDS, default=DEFAULT_BACKEND)
    common.add_argument("--out", type=Path, default=OUTPUT_DIR, help="output directory")
    common.add_argument("--json", action="store_true", help="print JSON instead of a summary")
    common.add_argument("--verbose", "-v", action="count", default=0)
    return common


def parse_args(argv=None) -> argparse.Namespace:
    common = _common()
    parser = argparse.ArgumentParser(
        prog="clifford_ricci",
        description="Verify the conformally perturbed 3-sphere metrics around the Clifford torus.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("verify-all", parents=[common], help="run every certificate and write report.json")

    scan = sub.add_parser("ricci-scan", parents=[common], help="minimum normalized Ricci eigenvalue")
    scan.add_argument("--plot", action="store_true")

    spec = sub.add_parser("spectrum", parents=[common], help="Jacobi spectrum of Delta + c on the Clifford torus")
    spec.add_argument("--c", type=float, required=True)
    spec.add_argument("--nmodes", type=int, default=None)

    bal = sub.add_parser("balance", parents=[common], help="Hersch balancing of a sphere-valued map")
    bal.add_argument("--map", default="clifford", help="clifford | shifted:<a1,a2,a3,a4>")
    bal.add_argument("--rho", default="uniform", help="uniform | file:<csv with n x n values>")
    bal.add_argument("--tol", type=float, default=1e-8)
    bal.add_argument("--max-iter", type=int, default=200)

    will = sub.add_parser("willmore-check", parents=[common], help="Willmore invariant in both metrics")
    will.add_argument("--t", default=None, help="comma separated t values")

    bump = sub.add_parser("bump-design", parents=[common], help="build the bump and check its conditions")
    bump.add_argument("--plot", action="store_true")

    maxr = sub.add_parser("max-r", parents=[common], help="search the largest feasible r")
    maxr.add_argument("--tol", type=float, default=DEFAULT_BISECTION_TOL)

    return parser.parse_args(argv)


def _emit(args, payload: dict, summary: str) -> None:
    if args.json:
        print(json.dumps(to_jsonable(payload), indent=2, sort_keys=True))
    else:
        print(summary)


def _rule() -> str:
    return "=" * 80


def cmd_verify_all(args, tol: Tolerances) -> int:
    n = args.n or DEFAULT_GRID_N
    start = time.time()
    rep = verify_example(args.r, n=n, tolerances=tol, backend=args.backend)
    path = emit_report(rep, args.out)
    if args.json:
        print(path.read_text(encoding="utf-8"), end="")
        return EXIT_OK if rep.overall else EXIT_FAIL

    summary = f"""
{_rule()}
Clifford torus verification   r = {rep.r:g}   n = {rep.n}   backend = {rep.backend}
{_rule()}
  Check                                 | Value          | Tolerance  | Result
{'-' * 80}
"""
    for c in rep.checks:
        result = "PASS" if c.passed else "FAIL"
        if c.expected_control:
            result += " (control)"
        summary += f"  {c.name:<37} | {c.value:>14.6e} | {c.tolerance:>10.1e} | {result}\n"
    summary += f"""{'-' * 80}
OVERALL: {"PASS" if rep.overall else "FAIL"}
OUTPUT FILES:
  - Report: {path}
Completed in {time.time() - start:.2f} seconds
{_rule()}"""
    print(summary)
    return EXIT_OK if rep.overall else EXIT_FAIL


def cmd_ricci_scan(args, tol: Tolerances) -> int:
    n = args.n or DEFAULT_SCAN_N
    p = profile(make_bump(args.r))
    res = scan_nonnegativity(p, n)
    export.write_csv(ricci_table(p), args.out / "ricci.csv")
    if args.plot:
        export.plot_ricci(p, args.out / "ricci.png")
    feasible = res.feasible(tol.ricci_slack)
    payload = {
        "r": args.r,
        "n": n,
        "min_eigenvalue": res.min_eigenvalue,
        "argmin_t": res.argmin_t,
        "direction": res.direction,
        "tail_constant": res.tail_constant,
        "tail_min_eigenvalue": res.tail_min_eigenvalue,
        "feasible": feasible,
    }
    _emit(
        args,
        payload,
        f"r={args.r:g} n={n}: min eigenvalue {res.min_eigenvalue:.6e} at t={res.argmin_t:.6f} "
        f"({res.direction}); tail C={res.tail_constant:.12g}; {'feasible' if feasible else 'NEGATIVE'}",
    )
    return EXIT_OK if feasible else EXIT_FAIL


def cmd_spectrum(args, tol: Tolerances) -> int:
    grid = TorusGrid(args.n or DEFAULT_GRID_N)
    rep = jacobi_spectrum(args.c, grid, nmodes=args.nmodes, backend=args.backend, tolerances=tol)
    payload = {
        "eigenvalues": [float(v) for v in rep.eigenvalues[:16]],
        "index": rep.index,
        "nullity": rep.nullity,
        "cmc_stable": rep.cmc_stable,
    }
    _emit(
        args,
        payload,
        f"c={rep.c:g} ({rep.backend}, n={grid.n}): index {rep.index}, nullity {rep.nullity}, "
        f"CMC {'stable' if rep.cmc_stable else 'unstable'}",
    )
    return EXIT_OK


def _load_rho(spec: str, grid: TorusGrid):
    if spec == "uniform":
        return None
    if spec.startswith("file:"):
        path = Path(spec[len("file:"):])
        try:
            values = pd.read_csv(path, header=None).to_numpy(dtype=float)
        except OSError as e:
            raise InputFileError(path, e) from e
        if values.shape != (grid.n, grid.n):
            raise ValueError(f"rho file has shape {values.shape}, expected {(grid.n, grid.n)}")
        return values
    raise ValueError(f"unknown rho {spec!r}")


def cmd_balance(args, tol: Tolerances) -> int:
    grid = TorusGrid(args.n or DEFAULT_GRID_N)
    rho = _load_rho(args.rho, grid)
    if args.map == "clifford":
        problem = clifford_problem(grid, rho)
    elif args.map.startswith("shifted:"):
        b = np.array([float(v) for v in args.map[len("shifted:"):].split(",")])
        if b.size != 4:
            raise ValueError("shifted map needs four components")
        problem = shifted_problem(grid, b, rho)
    else:
        raise ValueError(f"unknown map {args.map!r}")
    try:
        res = balance(problem, tol=args.tol, max_iter=args.max_iter)
    except NonConvergenceError as e:
        logger.error("%s", e)
        payload = {
            "a": [float(v) for v in e.a],
            "residual": e.residual,
            "iterations": e.iterations,
            "clamped": e.clamped,
            "converged": False,
        }
        _emit(args, payload, f"NOT balanced: residual={e.residual:.3e} iterations={e.iterations}")
        return EXIT_FAIL
    payload = res.as_dict() | {"converged": True}
    _emit(
        args,
        payload,
        f"balanced: a={np.array2string(res.param.a, precision=6)} residual={res.residual:.3e} "
        f"iterations={res.iterations}",
    )
    return EXIT_OK


def cmd_willmore(args, tol: Tolerances) -> int:
    p = profile(make_bump(args.r))
    if args.t:
        ts = [float(v) for v in args.t.split(",")]
    else:
        ts = willmore_times(args.r)
    grid = args.n or 128
    pairs = willmore_pairs(p, ts, grid=grid)
    export.write_csv(torus_table(p, ts, grid=grid), args.out / "torus.csv")
    ok = all(pr["relative_gap"] <= tol.quadrature for pr in pairs)
    lines = [f"  t={pr['t']:+.4f}  round={pr['round']:.12f}  perturbed={pr['perturbed']:.12f}  gap={pr['relative_gap']:.2e}" for pr in pairs]
    _emit(args, {"pairs": pairs, "passed": ok}, "\n".join(lines + [f"invariance {'PASS' if ok else 'FAIL'}"]))
    return EXIT_OK if ok else EXIT_FAIL


def cmd_bump(args, tol: Tolerances) -> int:
    bump = make_bump(args.r)
    report = verify_conditions(bump, tol=tol.geometric)
    p = profile(bump)
    export.write_csv(profile_table(p), args.out / "profile.csv")
    if args.plot:
        export.plot_profile(p, args.out / "profile.png")
    lines = [f"  {res.name:<20} {'PASS' if res.passed else 'FAIL'}  residual={res.residual:.3e}" for res in report.results]
    _emit(args, {"r": args.r, "conditions": report.as_dict(), "passed": report.passed}, "\n".join(lines))
    return EXIT_OK if report.passed else EXIT_FAIL


def cmd_max_r(args, tol: Tolerances) -> int:
    n = args.n or DEFAULT_SCAN_N
    res = max_feasible_r(n=n, tol=args.tol, slack=tol.ricci_slack)
    payload = {
        "r": res.r,
        "lower": res.lower,
        "upper": res.upper,
        "hit_domain_bound": res.hit_domain_bound,
        "min_eigenvalue": res.min_eigenvalue,
        "half_feasible": res.half_feasible,
        "evaluations": res.evaluations,
        "domain_bound": math.pi / 8,
    }
    bound = " (domain bound pi/8 reached)" if res.hit_domain_bound else ""
    _emit(args, payload, f"r* = {res.r:.6f}, bracket [{res.lower:.6f}, {res.upper:.6f}]{bound}")
    return EXIT_OK


COMMANDS = {
    "verify-all": cmd_verify_all,
    "ricci-scan": cmd_ricci_scan,
    "spectrum": cmd_spectrum,
    "balance": cmd_balance,
    "willmore-check": cmd_willmore,
    "bump-design": cmd_bump,
    "max-r": cmd_max_r,
}


def main(argv=None) -> int:
    args = parse_args(argv)
    level = logging.DEBUG if args.verbose > 1 else logging.INFO if args.verbose else getattr(logging, LOG_LEVEL.upper(), logging.WARNING)
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    tol = Tolerances.from_env()
    try:
        return COMMANDS[args.command](args, tol)
    except (CliffordError, ValueError) as e:
        print(f"ERROR: {e}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
