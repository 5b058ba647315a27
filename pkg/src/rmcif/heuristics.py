"""Local-search and evolutionary solvers for both robust variants.

Four local searches (ls1..ls4) share one strictly-improving best-neighbor
descent and differ only in their starting flows.  Nine evolutionary
solvers (ec1..ec9) share one steady-state loop and differ in the crossover
(flow centering and rounding, harmonization, or decomposition followed by
composition) paired with the mutation (perturbation, single-scenario cost
reduction, or a capped inner local search).

Every solver is deterministic for a fixed (instance, variant, parameters,
seed): randomness comes from one counter-based generator created from the
seed, and every tie is broken by position.
"""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .core import EC_SOLVERS, LS_SOLVERS, Instance, IntegerFlow, SolutionRecord
from .flow_ops import (
    center,
    compose,
    cost_reduce,
    decompose,
    find_flow,
    harmonize,
    perturb,
    round_flow,
)
from .objectives import Criterion, compute_optima, make_criterion

# Iteration ceiling for local search used as a mutation operator.
MUTATION_SEARCH_CAP = 50


@dataclass(frozen=True)
class SearchParams:
    """Tunable knobs shared by all heuristic solvers.

    `None` for a limit means unbounded.  Thresholds are percentages.
    """

    neighborhood_size: int = 30
    iteration_limit: int | None = None
    population_size: int = 30
    generation_limit: int | None = None
    no_improvement_limit: int = 300
    similarity_threshold: int = 5
    mutation_threshold: int = 1
    tournament_size: int = 3

    def __post_init__(self):
        for name in ("neighborhood_size", "population_size", "no_improvement_limit", "tournament_size"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")
        for name in ("iteration_limit", "generation_limit"):
            bound = getattr(self, name)
            if bound is not None and bound < 1:
                raise ValueError(f"{name} must be positive or None")
        for name in ("similarity_threshold", "mutation_threshold"):
            if not 0 <= getattr(self, name) <= 100:
                raise ValueError(f"{name} must lie in 0..100")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based generator; the same seed reproduces the same stream anywhere."""
    return np.random.Generator(np.random.Philox(int(seed)))


def _neighborhood(instance: Instance, flow: IntegerFlow, size: int) -> list[IntegerFlow]:
    """Iterated cost reduction around a flow, spread evenly over scenarios.

    Each scenario owns a chain of successive cost reductions starting at the
    flow; chains advance one step per round, and every intermediate flow is
    a neighbor.  Collection stops at `size` or when all chains hit their
    per-scenario optima.
    """
    network = instance.network
    rows = instance.scenarios.costs
    working = [flow] * len(rows)
    done = [False] * len(rows)
    found: list[IntegerFlow] = []
    while len(found) < size and not all(done):
        for s, row in enumerate(rows):
            if done[s]:
                continue
            nxt, optimal = cost_reduce(network, row, working[s])
            if optimal:
                done[s] = True
                continue
            working[s] = nxt
            found.append(nxt)
            if len(found) >= size:
                break
    return found


def _descend(
    instance: Instance,
    criterion: Criterion,
    start: IntegerFlow,
    params: SearchParams,
    iteration_limit: int | None,
    trace=None,
):
    """Best-neighbor descent accepting only strict improvements.

    Returns ``(flow, cost, accepted_moves)``.  `trace(flow, cost)` is called
    on every accepted move.  Costs are nonnegative integers and each move
    strictly decreases them, so the descent terminates without any limit.
    """
    current = start
    current_cost = criterion.evaluate(start)
    moves = 0
    while iteration_limit is None or moves < iteration_limit:
        best = None
        best_cost = None
        for cand in _neighborhood(instance, current, params.neighborhood_size):
            cost = criterion.evaluate(cand)
            if best_cost is None or cost < best_cost:
                best, best_cost = cand, cost
        if best is None or best_cost >= current_cost:
            break
        current, current_cost = best, best_cost
        moves += 1
        if trace is not None:
            trace(current, current_cost)
    return current, current_cost, moves


def _zero_flow_record(
    instance: Instance, criterion: Criterion, variant: str, solver: str, seed: int, elapsed: float
) -> SolutionRecord:
    zero = IntegerFlow((0,) * instance.network.arc_count)
    return SolutionRecord(
        variant, solver, criterion.evaluate(zero), zero.values, seed, elapsed
    )


def local_search(
    instance: Instance,
    variant: str,
    solver: str,
    params: SearchParams | None = None,
    seed: int = 0,
    clock=time.perf_counter,
    trace=None,
) -> SolutionRecord:
    """Run one local-search solver (ls1..ls4) and report its best flow.

    ls1 descends from an arbitrary feasible flow, ls2 from the
    best-evaluated scenario optimum, ls3 from the rounded center of all
    scenario optima; ls4 runs a full descent from every scenario optimum
    and keeps the best outcome.

    `trace(flow, cost)` fires on every accepted move, once per descent
    (so ls4 restarts the sequence for each of its starts).
    """
    if solver not in LS_SOLVERS:
        raise ValueError(f"unknown local-search solver {solver!r}")
    if params is None:
        params = SearchParams()
    t0 = clock()
    criterion = make_criterion(instance, variant)
    if instance.flow_value == 0:
        return _zero_flow_record(
            instance, criterion, variant, solver, seed, clock() - t0
        )

    if solver == "ls1":
        starts = [find_flow(instance.network, instance.flow_value)]
    else:
        optima = compute_optima(instance)
        if solver == "ls2":
            scored = [(criterion.evaluate(f), i) for i, f in enumerate(optima.flows)]
            starts = [optima.flows[min(scored)[1]]]
        elif solver == "ls3":
            starts = [round_flow(instance.network, center(instance.network, optima.flows))]
        else:
            starts = list(optima.flows)

    best_flow = None
    best_cost = None
    for start in starts:
        flow, cost, _ = _descend(
            instance, criterion, start, params, params.iteration_limit, trace=trace
        )
        if best_cost is None or cost < best_cost:
            best_flow, best_cost = flow, cost
    return SolutionRecord(
        variant, solver, best_cost, best_flow.values, seed, clock() - t0
    )


def tournament_select(population, mode: str, sample_size: int, rng, exclude=()):
    """Index of the best (or worst) member of a random distinct sample.

    Ties go to the lower member index.  Returns None when `exclude` leaves
    nothing to sample.
    """
    candidates = [i for i in range(len(population)) if i not in exclude]
    if not candidates:
        return None
    size = min(sample_size, len(candidates))
    picks = rng.choice(len(candidates), size=size, replace=False)
    sampled = sorted(candidates[int(p)] for p in picks)
    if mode == "best":
        return min(sampled, key=lambda i: (population[i][1], i))
    if mode == "worst":
        return max(sampled, key=lambda i: (population[i][1], -i))
    raise ValueError(f"unknown tournament mode {mode!r}")


def _similar(cost_a: int, cost_b: int, base: int, threshold: int) -> bool:
    """Costs within `threshold` percent of the population's best cost.

    Integer arithmetic throughout; a zero base degenerates to equality.
    """
    if base == 0:
        return cost_a == cost_b
    return 100 * abs(cost_a - cost_b) <= threshold * base


def insert_child(population, child, child_cost, similarity_threshold, tournament_size, rng):
    """Place a child into the population, preserving size and diversity.

    If some member's cost lies within the similarity band of the child's,
    the better of the two twins survives (the incumbent on ties; the first
    such member by index is the twin).  Otherwise the child replaces a
    worst-of-tournament member, with the population best shielded.
    """
    best_index = min(range(len(population)), key=lambda i: (population[i][1], i))
    base = population[best_index][1]
    for i, (_, cost) in enumerate(population):
        if _similar(cost, child_cost, base, similarity_threshold):
            updated = list(population)
            if child_cost < cost:
                updated[i] = (child, child_cost)
            return updated
    victim = tournament_select(
        population, "worst", tournament_size, rng, exclude=(best_index,)
    )
    if victim is None:
        return list(population)
    updated = list(population)
    updated[victim] = (child, child_cost)
    return updated


def evolutionary(
    instance: Instance,
    variant: str,
    solver: str,
    params: SearchParams | None = None,
    seed: int = 0,
    clock=time.perf_counter,
    trace=None,
) -> SolutionRecord:
    """Run one steady-state evolutionary solver (ec1..ec9).

    Per generation: two tournament-selected parents produce one child via
    the solver's crossover, the child is inserted under the similarity
    rule, and with probability mutation_threshold percent a random
    non-best member is replaced by its mutant.  The run stops at the
    generation limit or after no_improvement_limit stagnant generations.

    `trace(generation, best_cost)` fires after every generation.
    """
    if solver not in EC_SOLVERS:
        raise ValueError(f"unknown evolutionary solver {solver!r}")
    if params is None:
        params = SearchParams()
    kind = EC_SOLVERS.index(solver)
    cross_kind, mut_kind = divmod(kind, 3)
    rng = make_rng(seed)
    t0 = clock()
    criterion = make_criterion(instance, variant)
    if instance.flow_value == 0:
        return _zero_flow_record(
            instance, criterion, variant, solver, seed, clock() - t0
        )

    network = instance.network
    cost_rows = instance.scenarios.costs

    def crossover(a: IntegerFlow, b: IntegerFlow) -> IntegerFlow:
        if cross_kind == 0:
            return round_flow(network, center(network, [a, b]))
        if cross_kind == 1:
            return harmonize(network, a, b, rng)
        return compose(network, decompose(network, a), decompose(network, b), rng)

    def mutate(flow: IntegerFlow, trace=None) -> IntegerFlow:
        if mut_kind == 0:
            return perturb(network, flow, rng)
        if mut_kind == 1:
            s = int(rng.integers(0, len(cost_rows)))
            return cost_reduce(network, cost_rows[s], flow)[0]
        cap = MUTATION_SEARCH_CAP
        if params.iteration_limit is not None:
            cap = min(cap, params.iteration_limit)
        final, _, _ = _descend(instance, criterion, flow, params, cap, trace=trace)
        return final

    optima = compute_optima(instance)
    population = [(f, criterion.evaluate(f)) for f in optima.flows]
    if len(population) > params.population_size:
        order = sorted(range(len(population)), key=lambda i: (population[i][1], i))
        population = [population[i] for i in order[: params.population_size]]
    while len(population) < params.population_size:
        source = population[int(rng.integers(0, len(population)))][0]

        def harvest(flow, cost):
            if len(population) < params.population_size:
                population.append((flow, cost))

        before = len(population)
        mutant = mutate(source, trace=harvest)
        if len(population) == before and len(population) < params.population_size:
            population.append((mutant, criterion.evaluate(mutant)))

    best_cost = min(cost for _, cost in population)
    generations = 0
    stagnant = 0
    while (
        params.generation_limit is None or generations < params.generation_limit
    ) and stagnant < params.no_improvement_limit:
        first = tournament_select(population, "best", params.tournament_size, rng)
        second = tournament_select(population, "best", params.tournament_size, rng)
        child = crossover(population[first][0], population[second][0])
        population = insert_child(
            population,
            child,
            criterion.evaluate(child),
            params.similarity_threshold,
            params.tournament_size,
            rng,
        )
        if int(rng.integers(1, 101)) <= params.mutation_threshold:
            best_index = min(
                range(len(population)), key=lambda i: (population[i][1], i)
            )
            others = [i for i in range(len(population)) if i != best_index]
            if others:
                target = others[int(rng.integers(0, len(others)))]
                mutant = mutate(population[target][0])
                population[target] = (mutant, criterion.evaluate(mutant))
        generations += 1
        round_best = min(cost for _, cost in population)
        if round_best < best_cost:
            best_cost = round_best
            stagnant = 0
        else:
            stagnant += 1
        if trace is not None:
            trace(generations, round_best)

    winner = min(range(len(population)), key=lambda i: (population[i][1], i))
    flow, cost = population[winner]
    return SolutionRecord(variant, solver, cost, flow.values, seed, clock() - t0)
