"""Exact optima for small instances, plus LP-format export of the models.

The enumerator plays the role an external MILP solver would otherwise
play: it walks every feasible integer flow of the required value by
depth-first assignment with conservation and cost-bound pruning, so
heuristic output can be scored against true optima.  `export_lp` writes
the equivalent linearized model for anyone who prefers a real solver.
"""
from __future__ import annotations

import heapq

from .core import (
    ABSOLUTE,
    DEVIATION,
    VARIANTS,
    Instance,
    IntegerFlow,
    Network,
    RmcifError,
)
from .objectives import ScenarioOptima, compute_optima


class BudgetExceeded(RmcifError):
    """Enumeration gave up after exploring too many assignment nodes."""

    def __init__(self, explored: int):
        super().__init__(f"enumeration budget exhausted after {explored} nodes")
        self.explored = explored


class _OptimumHit(Exception):
    """Internal signal: the incumbent reached the variant's lower bound."""


def _topological_order(network: Network) -> list[int] | None:
    """Vertices in topological order (smallest index first), None on a cycle."""
    indegree = [0] * (network.vertex_count + 1)
    for arc in network.arcs:
        indegree[arc.head] += 1
    ready = [v for v in range(1, network.vertex_count + 1) if indegree[v] == 0]
    heapq.heapify(ready)
    order: list[int] = []
    while ready:
        v = heapq.heappop(ready)
        order.append(v)
        for i in network.out_arcs[v]:
            head = network.arcs[i].head
            indegree[head] -= 1
            if indegree[head] == 0:
                heapq.heappush(ready, head)
    return order if len(order) == network.vertex_count else None


def _balances(instance: Instance) -> list[int]:
    b = [0] * (instance.network.vertex_count + 1)
    b[instance.network.source] = instance.flow_value
    b[instance.network.sink] = -instance.flow_value
    return b


class _Search:
    """Shared state for the depth-first enumeration."""

    def __init__(self, instance: Instance, shift, lower: int, node_budget: int,
                 best_cost: int, best_values: tuple[int, ...]):
        self.network = instance.network
        self.rows = instance.scenarios.costs
        self.shift = shift
        self.lower = lower
        self.node_budget = node_budget
        self.best_cost = best_cost
        self.best_values = best_values
        self.balance = _balances(instance)
        self.values = [0] * self.network.arc_count
        self.partial = [0] * len(self.rows)
        self.explored = 0

    def tick(self) -> None:
        self.explored += 1
        if self.explored > self.node_budget:
            raise BudgetExceeded(self.explored)

    def bound(self) -> int:
        return max(p - z for p, z in zip(self.partial, self.shift))

    def add(self, arc_index: int, amount: int) -> None:
        self.values[arc_index] = amount
        if amount:
            for s, row in enumerate(self.rows):
                self.partial[s] += row[arc_index] * amount

    def remove(self, arc_index: int) -> None:
        amount = self.values[arc_index]
        self.values[arc_index] = 0
        if amount:
            for s, row in enumerate(self.rows):
                self.partial[s] -= row[arc_index] * amount

    def offer_leaf(self) -> None:
        cost = self.bound()
        if cost < self.best_cost:
            self.best_cost = cost
            self.best_values = tuple(self.values)
            if cost <= self.lower:
                raise _OptimumHit


def _search_dag(search: _Search, topo: list[int]) -> None:
    """Vertex-by-vertex outflow distribution along a topological order.

    When a vertex is reached, all its in-arcs are already fixed, so its
    required outflow is known exactly and only capacity-respecting
    distributions over its out-arcs are enumerated.
    """
    network = search.network
    out_indexed = [
        [(i, a.capacity) for i, a in enumerate(network.arcs) if a.tail == v]
        for v in range(network.vertex_count + 1)
    ]
    suffix = []
    for arcs_v in out_indexed:
        tail_sums = [0] * (len(arcs_v) + 1)
        for j in range(len(arcs_v) - 1, -1, -1):
            tail_sums[j] = tail_sums[j + 1] + arcs_v[j][1]
        suffix.append(tail_sums)
    in_indices = [
        [i for i, a in enumerate(network.arcs) if a.head == v]
        for v in range(network.vertex_count + 1)
    ]

    def visit(position: int) -> None:
        if position == len(topo):
            search.offer_leaf()
            return
        v = topo[position]
        required = sum(search.values[i] for i in in_indices[v]) + search.balance[v]
        if required < 0:
            return
        distribute(v, 0, required, position)

    def distribute(v: int, j: int, need: int, position: int) -> None:
        arcs_v = out_indexed[v]
        if j == len(arcs_v):
            if need == 0:
                visit(position + 1)
            return
        index, cap = arcs_v[j]
        rest = suffix[v][j + 1]
        for amount in range(max(0, need - rest), min(cap, need) + 1):
            search.tick()
            search.add(index, amount)
            if search.bound() < search.best_cost:
                distribute(v, j + 1, need - amount, position)
            search.remove(index)

    visit(0)


def _search_generic(search: _Search) -> None:
    """Arc-by-arc assignment with balance-interval pruning, for any network.

    For each endpoint of a just-assigned arc, the remaining unassigned
    incident capacities must still be able to close that vertex's balance;
    otherwise the branch is dead.
    """
    network = search.network
    n = network.vertex_count
    rem_out = [
        sum(network.arcs[i].capacity for i in network.out_arcs[v]) for v in range(n + 1)
    ]
    rem_in = [
        sum(network.arcs[i].capacity for i in network.in_arcs[v]) for v in range(n + 1)
    ]
    cur_out = [0] * (n + 1)
    cur_in = [0] * (n + 1)

    def closable(v: int) -> bool:
        need = search.balance[v] - (cur_out[v] - cur_in[v])
        return -rem_in[v] <= need <= rem_out[v]

    def assign(i: int) -> None:
        if i == network.arc_count:
            if all(
                cur_out[v] - cur_in[v] == search.balance[v] for v in range(1, n + 1)
            ):
                search.offer_leaf()
            return
        arc = network.arcs[i]
        rem_out[arc.tail] -= arc.capacity
        rem_in[arc.head] -= arc.capacity
        for amount in range(arc.capacity + 1):
            search.tick()
            search.add(i, amount)
            cur_out[arc.tail] += amount
            cur_in[arc.head] += amount
            if (
                closable(arc.tail)
                and closable(arc.head)
                and search.bound() < search.best_cost
            ):
                assign(i + 1)
            cur_out[arc.tail] -= amount
            cur_in[arc.head] -= amount
            search.remove(i)
        rem_out[arc.tail] += arc.capacity
        rem_in[arc.head] += arc.capacity

    assign(0)


def enumerate_optimum(
    instance: Instance, variant: str, node_budget: int = 100_000_000
) -> tuple[int, IntegerFlow]:
    """True optimum and a witness flow, by pruned exhaustive search.

    The incumbent starts at the best-evaluated scenario-optimal flow, and
    the search stops early once the incumbent meets the variant's lower
    bound (the largest scenario optimum for the absolute variant, zero for
    the deviation variant).  Raises BudgetExceeded when more than
    `node_budget` arc assignments get explored.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant tag {variant!r}")
    optima = compute_optima(instance)
    scenario_count = instance.scenarios.scenario_count
    if variant == DEVIATION:
        shift = optima.costs
        lower = 0
    else:
        shift = (0,) * scenario_count
        lower = max(optima.costs)

    def objective(flow: IntegerFlow) -> int:
        return max(
            sum(c * x for c, x in zip(row, flow.values)) - shift[s]
            for s, row in enumerate(instance.scenarios.costs)
        )

    best_values = None
    best_cost = None
    for flow in optima.flows:
        cost = objective(flow)
        if best_cost is None or cost < best_cost:
            best_cost, best_values = cost, flow.values
    if best_cost <= lower:
        return best_cost, IntegerFlow(best_values)

    search = _Search(instance, shift, lower, node_budget, best_cost, best_values)
    topo = _topological_order(instance.network)
    try:
        if topo is None:
            _search_generic(search)
        else:
            _search_dag(search, topo)
    except _OptimumHit:
        pass
    return search.best_cost, IntegerFlow(search.best_values)


def _lp_rows(label: str, terms: list[str], relation: str) -> list[str]:
    """One constraint as wrapped LP lines: `` label: t1 + t2 ... relation``.

    The leading plus of the first term is dropped; continuation lines keep
    a one-space indent so every body line of the file starts with a blank.
    """
    if terms[0].startswith("+ "):
        terms = [terms[0][2:], *terms[1:]]
    text = f" {label}: " + " ".join(terms) + f" {relation}"
    lines = []
    while len(text) > 72:
        cut = text.rfind(" ", 1, 72)
        if cut <= 0:
            break
        lines.append(text[:cut])
        text = " " + text[cut + 1 :]
    lines.append(text)
    return lines


def _term(coefficient: int, name: str) -> str:
    sign = "-" if coefficient < 0 else "+"
    magnitude = abs(coefficient)
    body = name if magnitude == 1 else f"{magnitude} {name}"
    return f"{sign} {body}"


def export_lp(instance: Instance, variant: str, optima: ScenarioOptima | None = None) -> str:
    """LP-format text of the linearized robust model.

    Minimizes the auxiliary variable y subject to one robust row per
    scenario (cost row minus y, bounded by zero for the absolute variant
    and by the scenario optimum for the deviation variant), one flow
    conservation equality per vertex, capacity bounds, and integrality of
    every arc variable.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown variant tag {variant!r}")
    if variant == DEVIATION and optima is None:
        optima = compute_optima(instance)
    network = instance.network
    names = [f"x_{a.tail}_{a.head}" for a in network.arcs]
    lines = [f"\\ robust minimum-cost flow model, {variant} variant"]
    lines.append("Minimize")
    lines.append(" obj: y")
    lines.append("Subject To")
    for s, row in enumerate(instance.scenarios.costs):
        terms = [_term(c, names[i]) for i, c in enumerate(row) if c != 0]
        terms.append("- y")
        bound = optima.costs[s] if variant == DEVIATION else 0
        lines.extend(_lp_rows(f"rob_{s + 1}", terms, f"<= {bound}"))
    balance = _balances(instance)
    for v in range(1, network.vertex_count + 1):
        terms = []
        for i, arc in enumerate(network.arcs):
            if arc.tail == v:
                terms.append(_term(1, names[i]))
            elif arc.head == v:
                terms.append(_term(-1, names[i]))
        if not terms:
            terms = ["0 y"]
        lines.extend(_lp_rows(f"cons_{v}", terms, f"= {balance[v]}"))
    lines.append("Bounds")
    for name, arc in zip(names, network.arcs):
        lines.append(f" 0 <= {name} <= {arc.capacity}")
    lines.append("Generals")
    text = ""
    for name in names:
        if text and len(text) + 1 + len(name) > 72:
            lines.append(text)
            text = f" {name}"
        else:
            text = f"{text} {name}"
    if text:
        lines.append(text)
    lines.append("End")
    return "\n".join(lines) + "\n"
