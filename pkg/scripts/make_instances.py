#!/usr/bin/env python3
"""Build a reusable corpus of layered .rmcif instances.

Seeds are consumed in order and draws the generator rejects (no feasible
flow value at the requested density) are skipped, so the corpus size is
exact even when the parameters are tight.
"""
from __future__ import annotations

import argparse
from pathlib import Path

from rmcif import GenerationError, GeneratorSpec, generate, write_instance


def int_pair(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("out", type=Path, help="directory for the .rmcif files")
    parser.add_argument("--count", type=int, default=20)
    parser.add_argument("--widths", default="3x3", help="middle layer widths, e.g. 4x4x2")
    parser.add_argument("--scenarios", type=int, default=3)
    parser.add_argument("--caps", type=int_pair, default=(1, 3), metavar="LO:HI")
    parser.add_argument("--costs", type=int_pair, default=(0, 9), metavar="LO:HI")
    parser.add_argument("--density", type=float, default=0.8)
    parser.add_argument("--flow-fraction", type=float, default=0.5)
    parser.add_argument("--start-seed", type=int, default=0)
    args = parser.parse_args()

    widths = tuple(int(w) for w in args.widths.split("x"))
    args.out.mkdir(parents=True, exist_ok=True)
    written = 0
    seed = args.start_seed
    while written < args.count:
        spec = GeneratorSpec(
            layer_widths=widths,
            scenario_count=args.scenarios,
            capacity_range=args.caps,
            cost_range=args.costs,
            density=args.density,
            flow_fraction=args.flow_fraction,
            seed=seed,
        )
        try:
            instance = generate(spec)
        except GenerationError:
            seed += 1
            continue
        path = args.out / f"{args.widths}_s{seed:04d}.rmcif"
        path.write_text(write_instance(instance))
        written += 1
        seed += 1
    print(f"wrote {written} instances to {args.out}")


if __name__ == "__main__":
    main()
