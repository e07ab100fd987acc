"""Command-line front end.

    bernoulli-opmat list
    bernoulli-opmat run bessel0 --n 10 [--rms-points 101] [--out-csv errors.csv] [--exact-mode]
    bernoulli-opmat run problem.txt --n 8
    bernoulli-opmat coeffs bessel0 --n-list 4,6,8,10 [--out-csv coeffs.csv]

Exit status: 0 on success, 2 for bad arguments or an unreadable problem file,
3 when the solver fails.
"""

from __future__ import annotations

import argparse
import csv
import io
import os
import sys
from pathlib import Path
from typing import Sequence, TextIO

from .benchmarks import (
    BENCHMARKS,
    DEFAULT_RMS_POINTS,
    MAX_ORDER,
    MIN_ORDER,
    SolveReport,
    coefficient_decay,
    get_benchmark,
    report_solution,
    run_benchmark,
)
from .galerkin import DEFAULT_PRODUCT, SolverError, solve
from .operational import PRODUCT_BUILDERS
from .problem_file import ProblemFileError, load_problem_file

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_SOLVER = 3

PRECISION_ENV = "BERNOULLI_OPMAT_PRECISION"
DEFAULT_DECIMALS = 10
CSV_DIGITS = 15


def table_decimals() -> int:
    raw = os.environ.get(PRECISION_ENV)
    if raw is None:
        return DEFAULT_DECIMALS
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{PRECISION_ENV} must be an integer, got {raw!r}") from None
    if not 0 <= value <= 17:
        raise ValueError(f"{PRECISION_ENV} must lie in 0..17, got {value}")
    return value


def csv_number(value: float | None) -> str:
    return "" if value is None else f"{value:.{CSV_DIGITS}g}"


def format_report(report: SolveReport, decimals: int, reference_rms: float | None = None) -> str:
    lines = [f"{report.name}  N={report.n}"]
    header = f"{'x':>6}  {'approx':>{decimals + 6}}  {'exact':>{decimals + 6}}  {'abs_error':>10}"
    lines.append(header)
    for x, approx, exact, err in report.point_values:
        exact_s = "-" if exact is None else f"{exact:.{decimals}f}"
        err_s = "-" if err is None else f"{err:.3e}"
        lines.append(f"{x:>6.1f}  {approx:>{decimals + 6}.{decimals}f}  {exact_s:>{decimals + 6}}  {err_s:>10}")
    if report.rms is not None:
        lines.append(f"RMS ({len(report.grid_values)} points): {report.rms:.4e}")
    if reference_rms is not None:
        lines.append(f"reference RMS:     {reference_rms:.4e}")
    if report.newton_iters is not None:
        lines.append(f"Newton iterations: {report.newton_iters}")
    exact_mode = report.solution is not None and report.solution.exact_mode
    if exact_mode and report.residual_norm == 0:
        lines.append("residual: exactly zero (rational arithmetic)")
    else:
        lines.append(f"residual |R|_inf: {report.residual_norm:.3e}")
    return "\n".join(lines)


def grid_csv(report: SolveReport) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["x", "approx", "exact", "abs_error"])
    for row in report.grid_values:
        writer.writerow([csv_number(v) for v in row])
    return buf.getvalue()


def coeffs_csv(rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["N", "i", "abs_coeff"])
    for n, i, value in rows:
        writer.writerow([n, i, csv_number(value)])
    return buf.getvalue()


def _write_text(path: str | None, text: str, out: TextIO) -> None:
    # the whole document is rendered before anything is written, so failures leave no partial file
    if path is None or path == "-":
        out.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _order_arg(value: str) -> int:
    n = int(value)
    if not MIN_ORDER <= n <= MAX_ORDER:
        raise argparse.ArgumentTypeError(f"N must lie in {MIN_ORDER}..{MAX_ORDER}")
    return n


def _order_list(value: str) -> list[int]:
    try:
        return [_order_arg(v.strip()) for v in value.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {value!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bernoulli-opmat",
        description="Bernoulli-polynomial operational-matrix solver for initial-value problems on [0, 1].",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list the built-in benchmarks")

    run = sub.add_parser("run", help="solve a benchmark or a problem file and print the error table")
    run.add_argument("target", help="benchmark name or path to a problem file")
    run.add_argument("--n", type=_order_arg, default=None, help="truncation order N (default 10, or the file's N)")
    run.add_argument("--rms-points", type=int, default=None, help=f"RMS grid size (default {DEFAULT_RMS_POINTS})")
    run.add_argument("--out-csv", default=None, help="write x,approx,exact,abs_error rows on the RMS grid")
    run.add_argument("--exact-mode", action="store_true", help="solve in rational arithmetic (linear problems)")
    run.add_argument("--product", choices=sorted(PRODUCT_BUILDERS), default=DEFAULT_PRODUCT)

    coeffs = sub.add_parser("coeffs", help="emit |a_i| for several N (coefficient decay)")
    coeffs.add_argument("target", help="benchmark name")
    coeffs.add_argument("--n-list", type=_order_list, default=[4, 6, 8, 10])
    coeffs.add_argument("--out-csv", default=None)
    coeffs.add_argument("--product", choices=sorted(PRODUCT_BUILDERS), default=DEFAULT_PRODUCT)
    return parser


def _cmd_list(out: TextIO) -> int:
    for bench in BENCHMARKS.values():
        out.write(f"{bench.name:<14} {bench.description}\n")
    return EXIT_OK


def _cmd_run(args, out: TextIO, err: TextIO) -> int:
    decimals = table_decimals()
    if args.target in BENCHMARKS:
        n = args.n if args.n is not None else 10
        rms_points = args.rms_points or DEFAULT_RMS_POINTS
        report = run_benchmark(args.target, n, rms_points, exact_mode=args.exact_mode, product=args.product)
    else:
        path = Path(args.target)
        if not path.exists():
            err.write(f"error: {args.target!r} is neither a benchmark ({', '.join(BENCHMARKS)}) nor a file\n")
            return EXIT_USAGE
        spec = load_problem_file(path)
        n = args.n if args.n is not None else spec.n
        rms_points = args.rms_points or spec.rms_points
        sol = solve(spec.problem, n, exact_mode=args.exact_mode, product=args.product)
        report = report_solution(path.name, sol, rms_points)
    reference = BENCHMARKS[args.target].reference_rms.get(n) if args.target in BENCHMARKS else None
    body = grid_csv(report) if args.out_csv else None
    out.write(format_report(report, decimals, reference) + "\n")
    if body is not None:
        _write_text(args.out_csv, body, out)
    return EXIT_OK


def _cmd_coeffs(args, out: TextIO) -> int:
    get_benchmark(args.target)
    rows = coefficient_decay(args.target, args.n_list, product=args.product)
    _write_text(args.out_csv, coeffs_csv(rows), out)
    return EXIT_OK


def main(argv: Sequence[str] | None = None, out: TextIO | None = None, err: TextIO | None = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "list":
            return _cmd_list(out)
        if args.command == "run":
            return _cmd_run(args, out, err)
        return _cmd_coeffs(args, out)
    except ProblemFileError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except SolverError as exc:
        norm = "" if exc.residual_norm is None else f" (residual norm {exc.residual_norm:.3e})"
        err.write(f"solver failure: {exc}{norm}\n")
        return EXIT_SOLVER
    except ValueError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
