"""Shared fixtures: tiny hand-built networks and seeded instance streams."""
from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from rmcif import (
    Arc,
    GenerationError,
    GeneratorSpec,
    Instance,
    Network,
    ScenarioSet,
    generate,
    parse_instance,
)

settings.register_profile(
    "suite", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("suite")

# Two arc-disjoint paths of capacity 1; scenario 1 favors the upper path,
# scenario 2 the lower.  Every solver question about it can be answered by
# looking at its three feasible flows.
DIAMOND_TEXT = """p rmcif 4 4 2 1
a 1 2 1
a 1 3 1
a 2 4 1
a 3 4 1
s 1 1 2 1 2
s 2 2 1 2 1
"""


@pytest.fixture
def diamond() -> Instance:
    return parse_instance(DIAMOND_TEXT)


@pytest.fixture
def four_path() -> Network:
    """Four vertex-disjoint unit-capacity paths from source 1 to sink 6."""
    arcs = []
    for middle in (2, 3, 4, 5):
        arcs.append(Arc(1, middle, 1))
    for middle in (2, 3, 4, 5):
        arcs.append(Arc(middle, 6, 1))
    return Network(6, tuple(arcs))


def chain_instance(
    vertices: int, capacity: int, flow_value: int, cost_rows=None
) -> Instance:
    """Single path 1 -> 2 -> ... -> n; the unique route for any flow."""
    arcs = tuple(Arc(v, v + 1, capacity) for v in range(1, vertices))
    if cost_rows is None:
        cost_rows = ((1,) * len(arcs),)
    return Instance(Network(vertices, arcs), ScenarioSet(tuple(cost_rows)), flow_value)


def gen(seed: int, widths=(2, 2), scenarios=2, caps=(1, 3), costs=(0, 9),
        density=1.0, flow_value=None, flow_fraction=0.5) -> Instance:
    return generate(
        GeneratorSpec(
            layer_widths=tuple(widths),
            scenario_count=scenarios,
            capacity_range=caps,
            cost_range=costs,
            density=density,
            flow_value=flow_value,
            flow_fraction=flow_fraction,
            seed=seed,
        )
    )


def seeded_instances(count: int, start_seed: int = 0, **kwargs):
    """Yield (seed, instance) pairs, skipping seeds the generator rejects."""
    produced = 0
    seed = start_seed
    while produced < count:
        try:
            instance = gen(seed, **kwargs)
        except GenerationError:
            seed += 1
            continue
        yield seed, instance
        produced += 1
        seed += 1
