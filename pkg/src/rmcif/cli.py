"""Command-line front end: generate, solve, export-lp, bench."""
from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .bench import run_bench, solve_one, summary_table
from .core import (
    ABSOLUTE,
    ALL_SOLVERS,
    DEVIATION,
    HEURISTIC_SOLVERS,
    RmcifError,
    format_solution,
    parse_instance,
    write_instance,
)
from .exact import export_lp
from .generator import GeneratorSpec, generate
from .heuristics import SearchParams

_VARIANT_ALIASES = {
    "abs": ABSOLUTE,
    "absolute": ABSOLUTE,
    "dev": DEVIATION,
    "deviation": DEVIATION,
}

_UNBOUNDED_PARAMS = ("iteration_limit", "generation_limit")


def _variant(text: str) -> str:
    try:
        return _VARIANT_ALIASES[text.lower()]
    except KeyError:
        raise argparse.ArgumentTypeError(
            f"unknown variant {text!r} (expected abs or dev)"
        ) from None


def _int_range(text: str) -> tuple[int, int]:
    lo, sep, hi = text.partition(":")
    if not sep:
        raise argparse.ArgumentTypeError(f"expected lo:hi, got {text!r}")
    return int(lo), int(hi)


def _widths(text: str) -> tuple[int, ...]:
    return tuple(int(w) for w in text.split(","))


def _seeds(text: str) -> tuple[int, ...]:
    if ":" in text:
        lo, _, hi = text.partition(":")
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(s) for s in text.split(","))


def _solver_list(text: str) -> tuple[str, ...]:
    if text == "all":
        return HEURISTIC_SOLVERS
    solvers = tuple(s.strip() for s in text.split(","))
    for s in solvers:
        if s not in ALL_SOLVERS:
            raise argparse.ArgumentTypeError(f"unknown solver tag {s!r}")
    return solvers


def _coerce_param(name: str, value) -> object:
    if name in _UNBOUNDED_PARAMS and str(value).lower() in ("none", "inf", "unbounded"):
        return None
    return int(value)


def _build_params(config_path: str | None, overrides: list[str]) -> SearchParams:
    known = {f.name for f in dataclasses.fields(SearchParams)}
    settings: dict[str, object] = {}
    if config_path:
        loaded = json.loads(Path(config_path).read_text())
        if not isinstance(loaded, dict):
            raise RmcifError("config file must hold a JSON object")
        settings.update(loaded)
    for item in overrides:
        name, sep, value = item.partition("=")
        if not sep:
            raise RmcifError(f"expected name=value, got {item!r}")
        settings[name] = value
    unknown = set(settings) - known
    if unknown:
        raise RmcifError(f"unknown parameter names: {', '.join(sorted(unknown))}")
    coerced = {name: _coerce_param(name, value) for name, value in settings.items()}
    return SearchParams(**coerced)


def _emit(text: str, output: str | None) -> None:
    if output is None:
        sys.stdout.write(text)
    else:
        Path(output).write_text(text)


def _add_param_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument(
        "--param",
        action="append",
        default=[],
        metavar="NAME=VALUE",
        help="override one search parameter (repeatable); limits accept 'none'",
    )
    sub.add_argument("--config", help="JSON file of search parameter overrides")


def _make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rmcif",
        description="Heuristic and exact solvers for robust minimum-cost integer flows",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("generate", help="write a seeded layered instance")
    gen.add_argument("--layers", type=int, help="layer count (with a single --width)")
    gen.add_argument(
        "--width",
        type=_widths,
        required=True,
        help="layer width, or comma-separated per-layer widths",
    )
    gen.add_argument("--scenarios", type=int, required=True, help="scenario count")
    gen.add_argument("--density", type=float, default=1.0)
    gen.add_argument("--cap", type=_int_range, default=(0, 99), metavar="LO:HI")
    gen.add_argument("--cost", type=_int_range, default=(0, 99), metavar="LO:HI")
    gen.add_argument("--flow", type=int, help="required flow value (retries the draw)")
    gen.add_argument(
        "--flow-frac",
        type=float,
        default=0.5,
        help="required value as a fraction of max-flow (ignored with --flow)",
    )
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--retries", type=int, default=20)
    gen.add_argument("-o", "--output", help="output path (default: stdout)")

    solve = commands.add_parser("solve", help="run one solver on one instance")
    solve.add_argument("--instance", required=True)
    solve.add_argument("--variant", type=_variant, required=True)
    solve.add_argument("--solver", required=True, choices=ALL_SOLVERS)
    solve.add_argument("--seed", type=int, default=0)
    solve.add_argument("--budget", type=int, default=100_000_000,
                       help="node budget for the exact solver")
    _add_param_flags(solve)
    solve.add_argument("-o", "--output", help="solution path (default: stdout)")

    lp = commands.add_parser("export-lp", help="write the linearized model")
    lp.add_argument("--instance", required=True)
    lp.add_argument("--variant", type=_variant, required=True)
    lp.add_argument("-o", "--output", help="model path (default: stdout)")

    bench = commands.add_parser("bench", help="run a solver battery over a directory")
    bench.add_argument("--dir", required=True, help="directory of .rmcif instances")
    bench.add_argument("--variants", default="abs,dev",
                       help="comma-separated variant tags")
    bench.add_argument("--solvers", type=_solver_list, default=HEURISTIC_SOLVERS,
                       help="'all' or a comma-separated list")
    bench.add_argument("--seeds", type=_seeds, default=(0,),
                       help="'lo:hi' or comma-separated seeds")
    bench.add_argument("--out", required=True, help="CSV output path")
    bench.add_argument("--sol-dir", help="directory for per-run .sol files")
    bench.add_argument("--no-exact", action="store_true",
                       help="skip exact optima (no error/speedup columns)")
    bench.add_argument("--budget", type=int, default=100_000_000)
    _add_param_flags(bench)
    return parser


def _cmd_generate(args) -> int:
    widths = args.width
    if len(widths) == 1:
        if args.layers is None:
            raise RmcifError("a single --width needs --layers")
        widths = widths * args.layers
    elif args.layers is not None and args.layers != len(widths):
        raise RmcifError("--layers disagrees with the number of --width entries")
    spec = GeneratorSpec(
        layer_widths=widths,
        scenario_count=args.scenarios,
        capacity_range=args.cap,
        cost_range=args.cost,
        density=args.density,
        flow_value=args.flow,
        flow_fraction=args.flow_frac,
        seed=args.seed,
        max_retries=args.retries,
    )
    _emit(write_instance(generate(spec)), args.output)
    return 0


def _cmd_solve(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    params = _build_params(args.config, args.param)
    record = solve_one(
        instance, args.variant, args.solver, args.seed, params,
        exact_budget=args.budget,
    )
    _emit(format_solution(record, instance), args.output)
    if args.output is not None:
        print(
            f"{args.solver} {args.variant}: robust cost {record.robust_cost}"
            f" in {record.elapsed_seconds:.3f} s"
        )
    return 0


def _cmd_export_lp(args) -> int:
    instance = parse_instance(Path(args.instance).read_text())
    _emit(export_lp(instance, args.variant), args.output)
    return 0


def _cmd_bench(args) -> int:
    variants = tuple(_variant(v) for v in args.variants.split(","))
    params = _build_params(args.config, args.param)
    report = run_bench(
        args.dir,
        variants,
        args.solvers,
        args.seeds,
        params,
        out_csv=args.out,
        sol_dir=args.sol_dir,
        compute_exact=not args.no_exact,
        exact_budget=args.budget,
    )
    print(summary_table(report))
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return 0


def main(argv=None) -> int:
    args = _make_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "solve": _cmd_solve,
        "export-lp": _cmd_export_lp,
        "bench": _cmd_bench,
    }
    try:
        return handlers[args.command](args)
    except RmcifError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
