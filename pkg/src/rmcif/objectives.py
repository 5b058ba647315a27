"""Robust objective evaluation for both problem variants.

The absolute objective of a flow is its worst cost over the scenarios.
The deviation objective is its worst regret: the gap between its cost
under a scenario and the best cost any feasible flow of the required
value achieves under that same scenario.  Scenario optima are therefore
shared, cacheable inputs; `compute_optima` memoizes them per instance.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from .core import (
    ABSOLUTE,
    DEVIATION,
    Instance,
    IntegerFlow,
    WrongFlowValue,
    flow_cost,
    validate_flow,
)
from .flow_ops import min_cost_flow


@dataclass(frozen=True)
class ScenarioOptima:
    """Per-scenario minimum costs and one optimal flow witnessing each."""

    costs: tuple[int, ...]
    flows: tuple[IntegerFlow, ...]


@lru_cache(maxsize=None)
def compute_optima(instance: Instance) -> ScenarioOptima:
    """Minimum-cost flow of value F under each scenario separately."""
    costs = []
    flows = []
    for s, cost_row in enumerate(instance.scenarios.costs):
        flow = min_cost_flow(instance.network, cost_row, instance.flow_value)
        flows.append(flow)
        costs.append(flow_cost(instance, flow, s))
    return ScenarioOptima(tuple(costs), tuple(flows))


def _require_feasible(instance: Instance, flow) -> None:
    value = validate_flow(instance, flow)
    if value != instance.flow_value:
        raise WrongFlowValue(
            f"flow value {value} differs from required value {instance.flow_value}"
        )


def eval_absolute(instance: Instance, flow) -> int:
    """Worst scenario cost of a feasible flow of the required value."""
    _require_feasible(instance, flow)
    return max(
        flow_cost(instance, flow, s) for s in range(instance.scenarios.scenario_count)
    )


def eval_deviation(instance: Instance, flow, optima: ScenarioOptima) -> int:
    """Worst regret of a feasible flow against the per-scenario optima."""
    _require_feasible(instance, flow)
    return max(
        flow_cost(instance, flow, s) - optima.costs[s]
        for s in range(instance.scenarios.scenario_count)
    )


@dataclass
class Criterion:
    """Callable robust objective with an evaluation counter.

    Heuristics rank candidate flows through one of these; the counter
    supports search-effort accounting in experiments.
    """

    instance: Instance
    variant: str
    optima: ScenarioOptima | None = None
    evaluations: int = field(default=0)

    def evaluate(self, flow) -> int:
        self.evaluations += 1
        if self.variant == ABSOLUTE:
            return eval_absolute(self.instance, flow)
        return eval_deviation(self.instance, flow, self.optima)


def make_criterion(instance: Instance, variant: str) -> Criterion:
    """Build the objective for a variant, computing scenario optima if needed."""
    if variant not in (ABSOLUTE, DEVIATION):
        raise ValueError(f"unknown variant {variant!r}")
    optima = compute_optima(instance) if variant == DEVIATION else None
    return Criterion(instance, variant, optima)
