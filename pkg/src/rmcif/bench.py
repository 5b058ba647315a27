"""Batch experiment harness: solver dispatch, error/speedup accounting, CSV.

A benchmark cell is one (instance, variant, solver, seed) run.  The exact
optimum of each (instance, variant) pair is enumerated once and reused for
every cell's relative error and speedup; shared per-scenario optima are
computed before any clock starts, so solvers are timed on search alone.
Failing cells are recorded with their error message, reported as warnings,
and left out of the CSV and the averages.
"""
from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from .core import (
    EC_SOLVERS,
    LS_SOLVERS,
    Instance,
    RmcifError,
    SolutionRecord,
    format_solution,
    parse_instance,
)
from .exact import enumerate_optimum
from .heuristics import SearchParams, evolutionary, local_search
from .objectives import compute_optima

CSV_COLUMNS = (
    "instance",
    "variant",
    "solver",
    "seed",
    "robust_cost",
    "exact_cost",
    "rel_error_pct",
    "seconds",
    "speedup",
)


def solve_one(
    instance: Instance,
    variant: str,
    solver: str,
    seed: int = 0,
    params: SearchParams | None = None,
    clock=time.perf_counter,
    exact_budget: int = 100_000_000,
) -> SolutionRecord:
    """Run a single solver tag (ls*, ec*, or exact) on one instance.

    Per-scenario optima are warmed up front so their one-time cost never
    lands in any solver's measured time.
    """
    compute_optima(instance)
    if solver in LS_SOLVERS:
        return local_search(instance, variant, solver, params, seed, clock)
    if solver in EC_SOLVERS:
        return evolutionary(instance, variant, solver, params, seed, clock)
    if solver == "exact":
        start = clock()
        cost, flow = enumerate_optimum(instance, variant, exact_budget)
        return SolutionRecord(variant, solver, cost, flow.values, seed, clock() - start)
    raise ValueError(f"unknown solver tag {solver!r}")


@dataclass(frozen=True)
class BenchRow:
    """One benchmark cell; `error` is set instead of results when it failed."""

    instance: str
    variant: str
    solver: str
    seed: int
    robust_cost: int | None = None
    exact_cost: int | None = None
    rel_error_pct: float | None = None
    seconds: float | None = None
    speedup: float | None = None
    error: str | None = None


@dataclass(frozen=True)
class SolverSummary:
    """Averages for one (variant, solver) pair over its successful cells."""

    variant: str
    solver: str
    runs: int
    mean_error_pct: float | None
    mean_speedup: float | None
    mean_seconds: float


@dataclass
class BenchReport:
    rows: list[BenchRow] = field(default_factory=list)
    summaries: list[SolverSummary] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


def _mean(values: list[float]) -> float | None:
    return sum(values) / len(values) if values else None


def _load_instances(source) -> list[tuple[str, Instance]]:
    """Accepts a directory (all *.rmcif inside, sorted) or a list of paths."""
    paths: list[Path]
    if isinstance(source, (str, Path)):
        base = Path(source)
        if not base.is_dir():
            raise RmcifError(f"instance directory not found: {source}")
        paths = sorted(base.glob("*.rmcif"))
        if not paths:
            raise RmcifError(f"no .rmcif instances found under {source}")
    else:
        paths = [Path(p) for p in source]
    return [(p.stem, parse_instance(p.read_text())) for p in paths]


def run_bench(
    instances,
    variants: Sequence[str],
    solvers: Sequence[str],
    seeds: Sequence[int],
    params: SearchParams | None = None,
    out_csv: str | Path | None = None,
    sol_dir: str | Path | None = None,
    compute_exact: bool = True,
    exact_budget: int = 100_000_000,
    clock=time.perf_counter,
) -> BenchReport:
    """Run every (instance, variant, solver, seed) cell and aggregate.

    `instances` is a directory of .rmcif files or a list of file paths.
    Exact optima (for errors and speedups) are enumerated once per
    instance and variant when `compute_exact` is set; an exhausted
    enumeration budget downgrades that pair to cost-only reporting.
    """
    loaded = _load_instances(instances)
    report = BenchReport()
    exact_results: dict[tuple[str, str], tuple[int, float]] = {}
    if compute_exact:
        for name, instance in loaded:
            compute_optima(instance)
            for variant in variants:
                start = clock()
                try:
                    cost, _ = enumerate_optimum(instance, variant, exact_budget)
                except RmcifError as exc:
                    report.warnings.append(f"{name}/{variant}: exact solve failed: {exc}")
                    continue
                exact_results[(name, variant)] = (cost, clock() - start)

    sol_path = Path(sol_dir) if sol_dir is not None else None
    if sol_path is not None:
        sol_path.mkdir(parents=True, exist_ok=True)

    for name, instance in loaded:
        for variant in variants:
            exact_pair = exact_results.get((name, variant))
            for solver in solvers:
                for seed in seeds:
                    try:
                        record = solve_one(
                            instance, variant, solver, seed, params, clock, exact_budget
                        )
                    except RmcifError as exc:
                        report.warnings.append(
                            f"{name}/{variant}/{solver}/seed {seed} failed: {exc}"
                        )
                        report.rows.append(
                            BenchRow(name, variant, solver, seed, error=str(exc))
                        )
                        continue
                    row = _score(name, record, exact_pair, report.warnings)
                    report.rows.append(row)
                    if sol_path is not None:
                        out = sol_path / f"{name}_{variant}_{solver}_s{seed}.sol"
                        out.write_text(format_solution(record, instance))

    for variant in variants:
        for solver in solvers:
            cells = [
                r
                for r in report.rows
                if r.variant == variant and r.solver == solver and r.error is None
            ]
            if not cells:
                continue
            report.summaries.append(
                SolverSummary(
                    variant,
                    solver,
                    len(cells),
                    _mean([r.rel_error_pct for r in cells if r.rel_error_pct is not None]),
                    _mean([r.speedup for r in cells if r.speedup is not None]),
                    _mean([r.seconds for r in cells]),
                )
            )

    if out_csv is not None:
        write_csv(report, out_csv)
    return report


def _score(name, record, exact_pair, warnings) -> BenchRow:
    exact_cost = None
    rel_error = None
    speedup = None
    if exact_pair is not None:
        exact_cost, exact_seconds = exact_pair
        if exact_cost > 0:
            rel_error = 100.0 * (record.robust_cost - exact_cost) / exact_cost
        elif record.robust_cost == 0:
            rel_error = 0.0
        else:
            warnings.append(
                f"{name}/{record.variant}/{record.solver}/seed {record.seed}:"
                f" relative error undefined (exact optimum 0, got {record.robust_cost})"
            )
        if record.elapsed_seconds > 0:
            speedup = exact_seconds / record.elapsed_seconds
    return BenchRow(
        name,
        record.variant,
        record.solver,
        record.seed,
        record.robust_cost,
        exact_cost,
        rel_error,
        record.elapsed_seconds,
        speedup,
    )


def write_csv(report: BenchReport, path: str | Path) -> None:
    """Successful cells only, one line each, in run order."""
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_COLUMNS)
        for row in report.rows:
            if row.error is not None:
                continue
            writer.writerow(
                [
                    row.instance,
                    row.variant,
                    row.solver,
                    row.seed,
                    row.robust_cost,
                    "" if row.exact_cost is None else row.exact_cost,
                    "" if row.rel_error_pct is None else f"{row.rel_error_pct:.4f}",
                    f"{row.seconds:.6f}",
                    "" if row.speedup is None else f"{row.speedup:.4f}",
                ]
            )


def summary_table(report: BenchReport) -> str:
    """Fixed-width text table of the per-(variant, solver) averages."""
    header = f"{'variant':<10} {'solver':<7} {'runs':>5} {'err%':>9} {'speedup':>10} {'seconds':>10}"
    lines = [header, "-" * len(header)]
    for s in report.summaries:
        err = "-" if s.mean_error_pct is None else f"{s.mean_error_pct:.2f}"
        spd = "-" if s.mean_speedup is None else f"{s.mean_speedup:.2f}"
        lines.append(
            f"{s.variant:<10} {s.solver:<7} {s.runs:>5} {err:>9} {spd:>10}"
            f" {s.mean_seconds:>10.4f}"
        )
    return "\n".join(lines)
