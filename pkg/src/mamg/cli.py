"""Benchmark command line: solve catalog problems over grid sequences.

``mamg --example ex4 --n 8,16,32`` prints a convergence table (error,
order, relative residual, cycle count, cpu time per grid).  Multiple
examples run as one sweep, optionally in parallel threads; ``--output csv``
emits machine-readable rows with full-precision numbers.

Exit status: 0 if every run converged, 2 if any run failed to converge
(or aborted on degenerate data), 1 for usage or configuration errors.
"""

from __future__ import annotations

import argparse
import os
import statistics
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, DataError, DegenerateNodeError
from .grid import dump_field
from .multigrid import MODES, SolverConfig, solve
from .problems import catalog, problem_names
from .smoother import ORDERINGS

CSV_HEADER = "example,n,relres,error,order,iter,cpu_seconds,indefinite_updates"

_GS_DEFAULT_MAX_ITERS = 5000


@dataclass
class RunSpec:
    """One example solved over an ascending list of grid sizes."""

    example: str
    n_list: list[int]
    config: SolverConfig
    repeat: int = 1
    dump: Optional[str] = None


@dataclass
class ResultRow:
    example: str
    n: int
    relres: Optional[float] = None
    error: Optional[float] = None
    order: Optional[float] = None
    iters: Optional[int] = None
    cpu_seconds: Optional[float] = None
    indefinite_updates: Optional[int] = None
    converged: bool = False


def run(spec: RunSpec) -> list[ResultRow]:
    """Solve one spec; returns a row per grid size (order from error decay)."""
    problem = catalog(spec.example)
    rows: list[ResultRow] = []
    prev_error: Optional[float] = None
    for n in spec.n_list:
        try:
            results = [solve(problem, n, spec.config) for _ in range(spec.repeat)]
        except (DataError, DegenerateNodeError) as exc:
            print(f"mamg: {spec.example} n={n}: {exc}", file=sys.stderr)
            rows.append(ResultRow(spec.example, n))
            prev_error = None
            continue
        solution, report = results[-1]
        cpu = statistics.median(r.wall_time for _, r in results)
        order = None
        if prev_error is not None and report.error_max and prev_error > 0:
            order = float(np.log2(prev_error / report.error_max))
        rows.append(ResultRow(
            example=spec.example, n=n,
            relres=report.relative_residual,
            error=report.error_max,
            order=order,
            iters=report.cycles,
            cpu_seconds=cpu,
            indefinite_updates=report.indefinite_updates,
            converged=report.converged,
        ))
        prev_error = report.error_max
        if spec.dump is not None:
            os.makedirs(spec.dump, exist_ok=True)
            dump_field(solution, os.path.join(spec.dump, f"{spec.example}-n{n}.csv"))
    return rows


def sweep(specs: list[RunSpec], workers: int = 1) -> list[ResultRow]:
    """Run several specs (threads when ``workers > 1``), rows sorted by
    (example, n) regardless of completion order."""
    if workers > 1 and len(specs) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(run, specs))
    else:
        results = [run(spec) for spec in specs]
    rows = [row for rows_ in results for row in rows_]
    rows.sort(key=lambda row: (row.example, row.n))
    return rows


def _fmt_table(rows: list[ResultRow]) -> str:
    header = f"{'example':<10}{'n':>6}{'relres':>10}{'error':>10}{'order':>7}{'iter':>6}{'cpu':>7}"
    lines = [header]
    for r in rows:
        relres = f"{r.relres:.1e}" if r.relres is not None else "--"
        error = f"{r.error:.1e}" if r.error is not None else "--"
        order = f"{r.order:.1f}" if r.order is not None else "--"
        iters = str(r.iters) if r.iters is not None else "--"
        cpu = f"{r.cpu_seconds:.1f}" if r.cpu_seconds is not None else "--"
        lines.append(f"{r.example:<10}{r.n:>6}{relres:>10}{error:>10}{order:>7}{iters:>6}{cpu:>7}")
    return "\n".join(lines)


def _csv_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _fmt_csv(rows: list[ResultRow]) -> str:
    lines = [CSV_HEADER]
    for r in rows:
        lines.append(",".join(_csv_cell(v) for v in (
            r.example, r.n, r.relres, r.error, r.order, r.iters,
            r.cpu_seconds, r.indefinite_updates,
        )))
    return "\n".join(lines)


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; the contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="mamg", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--example", required=True,
                        help=f"comma-separated problem ids ({', '.join(problem_names())})")
    parser.add_argument("--n", required=True,
                        help="comma-separated grid sizes (cells per axis, powers of two)")
    parser.add_argument("--mode", default="fmg-fas", choices=MODES)
    parser.add_argument("--nu1", type=int, default=2, help="pre-smoothing sweeps")
    parser.add_argument("--nu2", type=int, default=2, help="post-smoothing sweeps")
    parser.add_argument("--tol", type=float, default=1e-6,
                        help="relative residual tolerance")
    parser.add_argument("--max-cycles", type=int, default=None,
                        help="cap on extra V-cycles (default 50) or smoother "
                             f"iterations (default {_GS_DEFAULT_MAX_ITERS})")
    parser.add_argument("--ordering", default="lexicographic", choices=ORDERINGS)
    parser.add_argument("--coarse-sweeps", type=int, default=1,
                        help="smoother sweeps on the coarsest level")
    parser.add_argument("--output", default="table", choices=("table", "csv"))
    parser.add_argument("--dump", default=None, metavar="DIR",
                        help="write each solution field into this directory")
    parser.add_argument("--repeat", type=int, default=1,
                        help="solve repetitions; cpu column is the median")
    parser.add_argument("--workers", type=int, default=1,
                        help="thread count for multi-example sweeps")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        examples = [e.strip() for e in args.example.split(",") if e.strip()]
        n_list = sorted({int(tok) for tok in args.n.split(",") if tok.strip()})
        if not examples or not n_list:
            raise ConfigurationError("need at least one example and one grid size")
        max_cycles = args.max_cycles
        if max_cycles is None:
            max_cycles = _GS_DEFAULT_MAX_ITERS if args.mode == "gauss-seidel" else 50
        if args.repeat < 1 or args.workers < 1:
            raise ConfigurationError("--repeat and --workers must be >= 1")
        config = SolverConfig(nu1=args.nu1, nu2=args.nu2, tol=args.tol,
                              max_cycles=max_cycles, ordering=args.ordering,
                              coarse_sweeps=args.coarse_sweeps, mode=args.mode)
        specs = [RunSpec(example=e, n_list=n_list, config=config,
                         repeat=args.repeat, dump=args.dump) for e in examples]
        for spec in specs:
            problem = catalog(spec.example)
            if config.ordering == "red-black" and problem.dim != 2:
                raise ConfigurationError("red-black ordering is only supported in 2D")
            for n in spec.n_list:
                if n < 2 or n & (n - 1):
                    raise ConfigurationError(f"n must be a power of two >= 2, got {n}")
    except (ConfigurationError, ValueError) as exc:
        print(f"mamg: error: {exc}", file=sys.stderr)
        return 1
    rows = sweep(specs, workers=args.workers)
    if args.output == "csv":
        print(_fmt_csv(rows))
    else:
        print(_fmt_table(rows))
    return 0 if all(row.converged for row in rows) else 2


if __name__ == "__main__":
    sys.exit(main())
