"""Command-line front end.

Subcommands:
  solve      JSON problem spec -> CSV trajectory `t,x1,...,xn`
  table      alpha-ladder convergence study -> CSV `alpha,sup_dev,nev`
  mlf        print E_{alpha,beta}(z)
  stability  print the spectrum-based stability verdict

Exit codes: 0 success, 2 schema error, 3 solver/numeric error,
4 unstable verdict, 5 inconclusive verdict.  All CSV output uses '.' as
the decimal separator, '\n' newlines and 17 significant digits, so
repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from .analysis import Verdict, convergence_study, stability_verdict
from .errors import FraclodeError
from .rational_order import DEFAULT_TOL, DEFAULT_Q_MAX, approximate_order
from .solver import (
    DEFAULT_SIMPSON_TOL,
    CauchyProblem,
    Quadrature,
    SolveConfig,
    SumRange,
    solve_limit_perturbation,
    solve_matrix,
)
from .specfun import MLParams, mittag_leffler

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_SOLVER = 3
EXIT_UNSTABLE = 4
EXIT_INCONCLUSIVE = 5

DEFAULT_SKIP = 1


class SchemaError(Exception):
    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"field '{field}': {message}")
        self.field = field


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _require(spec: dict, field: str):
    if field not in spec:
        raise SchemaError(field, "missing required field")
    return spec[field]


def _load_json(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            spec = json.load(fh)
    except OSError as exc:
        raise SchemaError("<file>", f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError("<file>", f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(spec, dict):
        raise SchemaError("<file>", "top-level JSON value must be an object")
    return spec


def _parse_matrix(spec: dict, field: str, required: bool = True):
    if field not in spec:
        if required:
            raise SchemaError(field, "missing required field")
        return None
    try:
        m = np.asarray(spec[field], dtype=float)
    except (TypeError, ValueError) as exc:
        raise SchemaError(field, f"not a numeric matrix: {exc}") from exc
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise SchemaError(field, f"must be a square matrix, got shape {m.shape}")
    if not np.isfinite(m).all():
        raise SchemaError(field, "entries must be finite")
    return m


def _parse_grid(spec: dict, t0: float) -> np.ndarray:
    grid = _require(spec, "grid")
    if isinstance(grid, dict):
        for key in ("start", "end", "step"):
            if key not in grid:
                raise SchemaError("grid", f"missing '{key}' in grid object")
        start, end, step = (float(grid[k]) for k in ("start", "end", "step"))
        if step <= 0.0 or end < start:
            raise SchemaError("grid", "need step > 0 and end >= start")
        count = int(round((end - start) / step)) + 1
        times = start + step * np.arange(count)
    elif isinstance(grid, list):
        if not grid:
            raise SchemaError("grid", "explicit time list must be nonempty")
        times = np.asarray(grid, dtype=float)
    else:
        raise SchemaError("grid", "must be {start,end,step} or a list of times")
    if len(times) > 1 and np.min(np.diff(times)) <= 0.0:
        raise SchemaError("grid", "times must be strictly increasing")
    if times[0] <= t0:
        raise SchemaError("grid", f"all times must exceed t0={t0}")
    return times


def _parse_method(name, field: str = "method") -> Quadrature:
    if name is None:
        return Quadrature.RECTANGLE
    try:
        return Quadrature(name)
    except ValueError:
        raise SchemaError(field, f"must be 'rectangle' or 'simpson', got {name!r}") from None


def _parse_sum_range(name) -> SumRange:
    if name is None:
        return SumRange.FROM_ZERO
    try:
        return SumRange(name)
    except ValueError:
        raise SchemaError(
            "sum_range", f"must be 'from_zero' or 'from_one', got {name!r}"
        ) from None


def _parse_problem(spec: dict):
    A = _parse_matrix(spec, "A")
    x0 = np.asarray(_require(spec, "x0"), dtype=float).reshape(-1)
    if x0.shape[0] != A.shape[0]:
        raise SchemaError("x0", f"length {x0.shape[0]} does not match A dimension {A.shape[0]}")
    t0 = float(spec.get("t0", 0.0))
    alpha = float(_require(spec, "alpha"))
    if not (0.0 < alpha <= 1.0):
        raise SchemaError("alpha", f"must lie in (0, 1], got {alpha}")
    tol = float(spec.get("tol", DEFAULT_TOL))
    try:
        order = approximate_order(alpha, tol=tol, q_max=DEFAULT_Q_MAX)
    except FraclodeError as exc:
        raise SchemaError("alpha", str(exc)) from exc
    times = _parse_grid(spec, t0)
    config = SolveConfig(
        grid=times,
        quadrature=_parse_method(spec.get("method")),
        simpson_tol=float(spec.get("simpson_tol", DEFAULT_SIMPSON_TOL)),
        sum_range=_parse_sum_range(spec.get("sum_range")),
    )
    problem = CauchyProblem(A=A, x0=x0, t0=t0, order=order)
    eps_ladder = spec.get("eps_ladder")
    B = _parse_matrix(spec, "B", required=False)
    if eps_ladder is not None:
        if not isinstance(eps_ladder, list) or len(eps_ladder) < 2:
            raise SchemaError("eps_ladder", "must be a list with at least two entries")
        if B is None:
            raise SchemaError("B", "required when eps_ladder is given")
        if B.shape != A.shape:
            raise SchemaError("B", f"shape {B.shape} does not match A shape {A.shape}")
        eps_ladder = [float(e) for e in eps_ladder]
    return problem, config, eps_ladder, B


def _write_csv(path: str, header: list[str], rows) -> None:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_fmt(x) for x in row))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _banner(args) -> None:
    if getattr(args, "verbose", False):
        print(
            f"fraclode defaults: order tol={DEFAULT_TOL}, "
            f"simpson_tol={DEFAULT_SIMPSON_TOL}, residual skip={DEFAULT_SKIP}",
            file=sys.stderr,
        )


def cmd_solve(args) -> int:
    _banner(args)
    spec = _load_json(args.config)
    problem, config, eps_ladder, B = _parse_problem(spec)
    if eps_ladder is not None:
        traj, gaps = solve_limit_perturbation(problem, B, eps_ladder, config)
        if args.verbose:
            print("ladder gaps: " + ", ".join(_fmt(g) for g in gaps), file=sys.stderr)
    else:
        traj = solve_matrix(problem, config)
    header = ["t"] + [f"x{i + 1}" for i in range(problem.n)]
    _write_csv(args.out, header,
               ([t, *row] for t, row in zip(traj.times, traj.states)))
    return EXIT_OK


def cmd_table(args) -> int:
    _banner(args)
    spec = _load_json(args.config)
    a = float(_require(spec, "a"))
    alphas = _require(spec, "alphas")
    if not isinstance(alphas, list) or not alphas:
        raise SchemaError("alphas", "must be a nonempty list")
    alphas = [float(x) for x in alphas]
    if any(not (0.0 < x <= 1.0) for x in alphas):
        raise SchemaError("alphas", "entries must lie in (0, 1]")
    interval = _require(spec, "interval")
    if not (isinstance(interval, list) and len(interval) == 2):
        raise SchemaError("interval", "must be [start, end]")
    start, end = float(interval[0]), float(interval[1])
    h = float(args.h if args.h is not None else _require(spec, "h"))
    if h <= 0.0 or end <= start:
        raise SchemaError("h", "need h > 0 and end > start")
    method = _parse_method(args.method if args.method is not None
                           else spec.get("method"))
    # x(t0) is given one step before the first reported point.
    t0 = start - h
    rows = convergence_study(a, alphas, t0, end, h, backend=method,
                             skip=DEFAULT_SKIP)
    _write_csv(args.out, ["alpha", "sup_dev", "nev"],
               ([r.alpha, r.sup_deviation, r.nev] for r in rows))
    return EXIT_OK


def cmd_mlf(args) -> int:
    params = MLParams(alpha=args.alpha, beta=args.beta)
    print(_fmt(mittag_leffler(params, args.z)))
    return EXIT_OK


def cmd_stability(args) -> int:
    _banner(args)
    spec = _load_json(args.config)
    A = _parse_matrix(spec, "A")
    report = stability_verdict(A)
    print(report.verdict.value)
    if report.verdict is Verdict.ASYMPTOTICALLY_STABLE:
        return EXIT_OK
    if report.verdict is Verdict.UNSTABLE:
        return EXIT_UNSTABLE
    return EXIT_INCONCLUSIVE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclode",
        description="Linear constant-coefficient fractional-order ODE solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="solve a Cauchy problem from a JSON spec")
    p_solve.add_argument("--config", required=True, help="JSON problem spec")
    p_solve.add_argument("--out", required=True, help="output CSV path")
    p_solve.add_argument("--verbose", action="store_true")
    p_solve.set_defaults(func=cmd_solve)

    p_table = sub.add_parser("table", help="alpha-ladder convergence study")
    p_table.add_argument("--config", required=True, help="JSON case spec")
    p_table.add_argument("--out", required=True, help="output CSV path")
    p_table.add_argument("--method", choices=["rectangle", "simpson"],
                         help="override the case's quadrature method")
    p_table.add_argument("--h", type=float, help="override the case's grid step")
    p_table.add_argument("--verbose", action="store_true")
    p_table.set_defaults(func=cmd_table)

    p_mlf = sub.add_parser("mlf", help="evaluate E_{alpha,beta}(z)")
    p_mlf.add_argument("alpha", type=float)
    p_mlf.add_argument("beta", type=float)
    p_mlf.add_argument("z", type=float)
    p_mlf.set_defaults(func=cmd_mlf)

    p_stab = sub.add_parser("stability", help="stability verdict for A")
    p_stab.add_argument("--config", required=True, help="JSON spec containing A")
    p_stab.add_argument("--verbose", action="store_true")
    p_stab.set_defaults(func=cmd_stability)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error: {exc}", file=sys.stderr)
        return EXIT_SCHEMA
    except FraclodeError as exc:
        print(f"solver error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
