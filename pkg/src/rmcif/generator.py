"""Seeded random generator for layered benchmark instances.

Vertices sit in ordered layers between a source and a sink.  The source
feeds every first-layer vertex and every last-layer vertex feeds the sink;
between adjacent layers each candidate arc survives with the configured
density, after which a repair pass gives every stranded vertex one
incoming or outgoing arc so the whole network lies on source-sink paths.
Capacities and the scenario cost rows are then drawn uniformly, in one
fixed order, so an instance is a pure function of its spec.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .core import Arc, Instance, Network, RmcifError, ScenarioSet
from .flow_ops import max_flow_value
from .heuristics import make_rng


class GenerationError(RmcifError):
    """No feasible instance emerged within the retry budget."""


@dataclass(frozen=True)
class GeneratorSpec:
    """Description of one layered instance family member.

    `flow_value`, when set, is the required value F and the draw is
    retried until the realized max-flow supports it; otherwise F is the
    max-flow scaled by `flow_fraction`, rounded half-up.
    """

    layer_widths: tuple[int, ...]
    scenario_count: int
    capacity_range: tuple[int, int] = (0, 99)
    cost_range: tuple[int, int] = (0, 99)
    density: float = 1.0
    flow_value: int | None = None
    flow_fraction: float = 0.5
    seed: int = 0
    max_retries: int = 20

    def __post_init__(self):
        if not self.layer_widths or any(w < 1 for w in self.layer_widths):
            raise ValueError("layer widths must be positive")
        if self.scenario_count < 1:
            raise ValueError("scenario count must be positive")
        for name in ("capacity_range", "cost_range"):
            lo, hi = getattr(self, name)
            if lo < 0 or hi < lo:
                raise ValueError(f"{name} must satisfy 0 <= lo <= hi")
        if not 0 < self.density <= 1:
            raise ValueError("density must lie in (0, 1]")
        if self.flow_value is not None and self.flow_value < 0:
            raise ValueError("flow value must be nonnegative")
        if not 0 <= self.flow_fraction <= 1:
            raise ValueError("flow fraction must lie in [0, 1]")
        if self.max_retries < 1:
            raise ValueError("retry budget must be positive")


def _layer_vertices(widths: tuple[int, ...]) -> list[list[int]]:
    """Vertex numbers per layer: [source], the widths, [sink]."""
    layers = [[1]]
    next_vertex = 2
    for width in widths:
        layers.append(list(range(next_vertex, next_vertex + width)))
        next_vertex += width
    layers.append([next_vertex])
    return layers


def _draw_arcs(layers: list[list[int]], density: float, rng) -> list[tuple[int, int]]:
    pairs: list[tuple[int, int]] = []
    for v in layers[1]:
        pairs.append((1, v))
    for left, right in zip(layers[1:-2], layers[2:-1]):
        for u in left:
            for v in right:
                if rng.random() < density:
                    pairs.append((u, v))
    sink = layers[-1][0]
    for u in layers[-2]:
        pairs.append((u, sink))
    # Repair: every middle-layer vertex needs an entry and an exit.
    has_in = {h for _, h in pairs}
    for left, right in zip(layers[1:-2], layers[2:-1]):
        for v in right:
            if v not in has_in:
                u = left[int(rng.integers(0, len(left)))]
                pairs.append((u, v))
                has_in.add(v)
    has_out = {t for t, _ in pairs}
    for left, right in zip(layers[1:-2], layers[2:-1]):
        for u in left:
            if u not in has_out:
                v = right[int(rng.integers(0, len(right)))]
                pairs.append((u, v))
                has_out.add(u)
    return pairs


def generate(spec: GeneratorSpec) -> Instance:
    """One instance, fully determined by the spec (seed included)."""
    layers = _layer_vertices(spec.layer_widths)
    vertex_count = layers[-1][0]
    rng = make_rng(spec.seed)
    cap_lo, cap_hi = spec.capacity_range
    cost_lo, cost_hi = spec.cost_range
    for _ in range(spec.max_retries):
        pairs = _draw_arcs(layers, spec.density, rng)
        arcs = tuple(
            Arc(t, h, int(rng.integers(cap_lo, cap_hi + 1))) for t, h in pairs
        )
        rows = tuple(
            tuple(int(rng.integers(cost_lo, cost_hi + 1)) for _ in arcs)
            for _ in range(spec.scenario_count)
        )
        network = Network(vertex_count, arcs)
        capacity = max_flow_value(network)
        if spec.flow_value is not None:
            if spec.flow_value > capacity:
                continue
            flow_value = spec.flow_value
        else:
            flow_value = math.floor(spec.flow_fraction * capacity + 0.5)
        return Instance(network, ScenarioSet(rows), flow_value)
    raise GenerationError(
        f"no draw reached flow value {spec.flow_value} within"
        f" {spec.max_retries} attempts (seed {spec.seed})"
    )
