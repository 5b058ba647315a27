"""Domain model for the robust minimum-cost integer flow problem.

An instance couples a capacitated directed network with a finite set of
arc-cost scenarios and a required flow value.  Vertex 1 is always the
source and vertex n the sink; arcs, capacities and costs are integers.
Two robust objectives are supported downstream: the worst scenario cost
("absolute") and the worst regret against the per-scenario optima
("deviation").

Instances travel as plain-text ``.rmcif`` files (see `parse_instance`),
solutions as ``.sol`` files (see `format_solution`).  Vertices, arcs and
scenarios are numbered from 1 in files and error messages.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence, Union

Number = Union[int, Fraction]

ABSOLUTE = "absolute"
DEVIATION = "deviation"
VARIANTS = (ABSOLUTE, DEVIATION)

LS_SOLVERS = ("ls1", "ls2", "ls3", "ls4")
EC_SOLVERS = tuple(f"ec{i}" for i in range(1, 10))
HEURISTIC_SOLVERS = LS_SOLVERS + EC_SOLVERS
ALL_SOLVERS = HEURISTIC_SOLVERS + ("exact",)


class RmcifError(Exception):
    """Base class for every error raised by this package."""


class InstanceFormatError(RmcifError):
    """Malformed or inconsistent instance text."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {message}" if line is not None else message)


class CapacityViolation(RmcifError):
    """An arc value lies outside [0, capacity]."""

    def __init__(self, arc_index: int, message: str | None = None):
        self.arc_index = arc_index
        super().__init__(message or f"capacity violated on arc {arc_index + 1}")


class ConservationViolation(RmcifError):
    """Net flow at a vertex differs from what its role allows."""

    def __init__(self, vertex: int, message: str | None = None):
        self.vertex = vertex
        super().__init__(message or f"flow conservation violated at vertex {vertex}")


class WrongFlowValue(RmcifError):
    """A conserving flow whose value differs from the instance requirement."""


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    capacity: int


@dataclass(frozen=True)
class Network:
    """Directed graph with integer arc capacities, source 1 and sink n.

    At most one arc may join an ordered vertex pair and self-loops are
    rejected, so arcs are identified by their declaration index.
    """

    vertex_count: int
    arcs: tuple[Arc, ...]

    def __post_init__(self):
        n = self.vertex_count
        if n < 2:
            raise ValueError("a network needs at least a source and a sink")
        seen: set[tuple[int, int]] = set()
        for i, arc in enumerate(self.arcs):
            if not (1 <= arc.tail <= n and 1 <= arc.head <= n):
                raise ValueError(f"arc {i + 1}: vertex index out of range")
            if arc.tail == arc.head:
                raise ValueError(f"arc {i + 1}: self-loops are not allowed")
            if (arc.tail, arc.head) in seen:
                raise ValueError(f"arc {i + 1}: duplicate arc {arc.tail}->{arc.head}")
            seen.add((arc.tail, arc.head))
            if not isinstance(arc.capacity, int) or arc.capacity < 0:
                raise ValueError(f"arc {i + 1}: capacity must be a nonnegative integer")

    @property
    def source(self) -> int:
        return 1

    @property
    def sink(self) -> int:
        return self.vertex_count

    @property
    def arc_count(self) -> int:
        return len(self.arcs)

    @cached_property
    def out_arcs(self) -> tuple[tuple[int, ...], ...]:
        """Arc indices grouped by tail vertex; slot 0 is unused."""
        out: list[list[int]] = [[] for _ in range(self.vertex_count + 1)]
        for i, arc in enumerate(self.arcs):
            out[arc.tail].append(i)
        return tuple(tuple(lst) for lst in out)

    @cached_property
    def in_arcs(self) -> tuple[tuple[int, ...], ...]:
        inc: list[list[int]] = [[] for _ in range(self.vertex_count + 1)]
        for i, arc in enumerate(self.arcs):
            inc[arc.head].append(i)
        return tuple(tuple(lst) for lst in inc)


@dataclass(frozen=True)
class ScenarioSet:
    """Per-scenario arc unit costs, each vector in arc declaration order."""

    costs: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not self.costs:
            raise ValueError("at least one scenario is required")
        width = len(self.costs[0])
        for k, row in enumerate(self.costs, start=1):
            if len(row) != width:
                raise ValueError(f"scenario {k}: cost vector length mismatch")
            for c in row:
                if not isinstance(c, int) or c < 0:
                    raise ValueError(f"scenario {k}: costs must be nonnegative integers")

    @property
    def scenario_count(self) -> int:
        return len(self.costs)


@dataclass(frozen=True)
class Instance:
    """A network, its cost scenarios, and the required flow value.

    The flow value is checked against the maximum source-to-sink flow at
    construction time; an unreachable requirement is a hard error.
    """

    network: Network
    scenarios: ScenarioSet
    flow_value: int

    def __post_init__(self):
        if len(self.scenarios.costs[0]) != self.network.arc_count:
            raise ValueError("scenario cost vectors must have one entry per arc")
        if not isinstance(self.flow_value, int) or self.flow_value < 0:
            raise ValueError("flow value must be a nonnegative integer")
        # deferred import: flow_ops depends on the types defined above
        from .flow_ops import max_flow_value

        if self.flow_value > max_flow_value(self.network):
            raise ValueError("F exceeds maximum flow")


@dataclass(frozen=True)
class IntegerFlow:
    """Arc values of an integral flow, in arc declaration order."""

    values: tuple[int, ...]


@dataclass(frozen=True)
class FractionalFlow:
    """Arc values of an exact-rational flow."""

    values: tuple[Fraction, ...]


@dataclass(frozen=True)
class PseudoFlow:
    """Capacity-respecting arc values without the conservation guarantee."""

    values: tuple[Number, ...]


@dataclass(frozen=True)
class UnitFlow:
    """A value-1 flow: one simple source-to-sink path."""

    values: tuple[int, ...]
    vertices: tuple[int, ...]


def flow_value_of(network: Network, values: Sequence[Number]) -> Number:
    """Net outflow at the source."""
    total: Number = 0
    for arc, v in zip(network.arcs, values):
        if arc.tail == network.source:
            total += v
        elif arc.head == network.source:
            total -= v
    return total


def check_arc_values(network: Network, values: Sequence[Number]) -> list[Number]:
    """Check capacity bounds and return the per-vertex balance vector."""
    if len(values) != network.arc_count:
        raise ValueError("value vector length differs from the arc count")
    balance: list[Number] = [0] * (network.vertex_count + 1)
    for i, (arc, v) in enumerate(zip(network.arcs, values)):
        if v < 0 or v > arc.capacity:
            raise CapacityViolation(
                i,
                f"arc {i + 1} ({arc.tail}->{arc.head}): value {v} outside [0, {arc.capacity}]",
            )
        balance[arc.tail] += v
        balance[arc.head] -= v
    return balance


def validate_flow(instance: Instance, flow) -> Number:
    """Return the value of `flow` after checking capacities and conservation.

    Raises `CapacityViolation` or `ConservationViolation`; accepts any flow
    object with a `values` attribute, including exact-rational ones.
    """
    network = instance.network
    balance = check_arc_values(network, flow.values)
    for v in range(1, network.vertex_count + 1):
        if v in (network.source, network.sink):
            continue
        if balance[v] != 0:
            raise ConservationViolation(v)
    value = balance[network.source]
    if value < 0:
        raise ConservationViolation(network.source, "net source outflow is negative")
    return value


def flow_cost(instance: Instance, flow, scenario: int) -> Number:
    """Total cost of `flow` under the scenario with 0-based index `scenario`."""
    rows = instance.scenarios.costs
    if not 0 <= scenario < len(rows):
        raise IndexError(f"scenario index {scenario} out of range")
    return sum(c * v for c, v in zip(rows[scenario], flow.values))


def _int_token(token: str, what: str, line: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise InstanceFormatError(f"{what} is not an integer: {token!r}", line) from None


def parse_instance(text: str | bytes) -> Instance:
    """Parse ``.rmcif`` instance text.

    Grammar (ASCII, LF line endings, 1-based indices)::

        c <comment>                    anywhere
        p rmcif <n> <m> <K> <F>        exactly once, first non-comment line
        a <tail> <head> <capacity>     exactly m lines, declaration order
        s <k> <c_1> ... <c_m>          exactly K lines, k ascending from 1

    Errors carry the offending line number.
    """
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")

    header: tuple[int, int, int, int] | None = None
    header_line = 0
    arcs: list[Arc] = []
    pairs: set[tuple[int, int]] = set()
    rows: list[tuple[int, ...]] = []

    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise InstanceFormatError("duplicate problem line", lineno)
            if len(parts) != 6 or parts[1] != "rmcif":
                raise InstanceFormatError("malformed problem line", lineno)
            n, m, k, f = (_int_token(t, "problem field", lineno) for t in parts[2:])
            if n < 2:
                raise InstanceFormatError("vertex count must be at least 2", lineno)
            if m < 0 or k < 1 or f < 0:
                raise InstanceFormatError("problem counts out of range", lineno)
            header = (n, m, k, f)
            header_line = lineno
        elif tag == "a":
            if header is None:
                raise InstanceFormatError("arc line before problem line", lineno)
            if rows:
                raise InstanceFormatError("arc line after scenario lines", lineno)
            n, m, _, _ = header
            if len(arcs) >= m:
                raise InstanceFormatError(f"more than {m} arc lines", lineno)
            if len(parts) != 4:
                raise InstanceFormatError("malformed arc line", lineno)
            tail, head, cap = (_int_token(t, "arc field", lineno) for t in parts[1:])
            if not (1 <= tail <= n and 1 <= head <= n):
                raise InstanceFormatError("vertex index out of range", lineno)
            if tail == head:
                raise InstanceFormatError("self-loop arc", lineno)
            if (tail, head) in pairs:
                raise InstanceFormatError(f"duplicate arc {tail}->{head}", lineno)
            if cap < 0:
                raise InstanceFormatError("negative capacity", lineno)
            pairs.add((tail, head))
            arcs.append(Arc(tail, head, cap))
        elif tag == "s":
            if header is None:
                raise InstanceFormatError("scenario line before problem line", lineno)
            n, m, k, _ = header
            if len(arcs) != m:
                raise InstanceFormatError("scenario line before all arcs are declared", lineno)
            if len(rows) >= k:
                raise InstanceFormatError(f"more than {k} scenario lines", lineno)
            if len(parts) < 2:
                raise InstanceFormatError("malformed scenario line", lineno)
            index = _int_token(parts[1], "scenario index", lineno)
            if index != len(rows) + 1:
                raise InstanceFormatError(
                    f"scenario index {index} out of order (expected {len(rows) + 1})", lineno
                )
            costs = tuple(_int_token(t, "cost", lineno) for t in parts[2:])
            if len(costs) != m:
                raise InstanceFormatError(
                    f"scenario length mismatch: expected {m} costs, found {len(costs)}", lineno
                )
            if any(c < 0 for c in costs):
                raise InstanceFormatError("negative cost", lineno)
            rows.append(costs)
        else:
            raise InstanceFormatError(f"unknown line tag {tag!r}", lineno)

    if header is None:
        raise InstanceFormatError("missing problem line")
    n, m, k, f = header
    if len(arcs) != m:
        raise InstanceFormatError(f"expected {m} arc lines, found {len(arcs)}", header_line)
    if len(rows) != k:
        raise InstanceFormatError(f"expected {k} scenario lines, found {len(rows)}", header_line)

    try:
        return Instance(Network(n, tuple(arcs)), ScenarioSet(tuple(rows)), f)
    except ValueError as exc:
        raise InstanceFormatError(str(exc), header_line) from None


def write_instance(instance: Instance) -> str:
    """Canonical ``.rmcif`` text; `parse_instance` inverts it exactly."""
    network = instance.network
    lines = [
        f"p rmcif {network.vertex_count} {network.arc_count}"
        f" {instance.scenarios.scenario_count} {instance.flow_value}"
    ]
    for arc in network.arcs:
        lines.append(f"a {arc.tail} {arc.head} {arc.capacity}")
    for k, row in enumerate(instance.scenarios.costs, start=1):
        lines.append(f"s {k} " + " ".join(str(c) for c in row))
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolutionRecord:
    """One solver run: what was solved, by what, and the flow it returned.

    Elapsed time is measurement metadata: it is reported in benchmark output
    but kept out of the solution file so repeated runs write identical bytes.
    """

    variant: str
    solver: str
    robust_cost: int
    values: tuple[int, ...]
    seed: int
    elapsed_seconds: float = 0.0


def format_solution(record: SolutionRecord, instance: Instance) -> str:
    """``.sol`` text: one ``o`` header line, then nonzero arcs in arc order.

    The header is ``o <variant> <solver> <robust_cost> <seed>``.  Output
    depends only on the record's solver-determined fields, so a repeated
    (instance, variant, solver, seed) run reproduces the file exactly.
    """
    if record.variant not in VARIANTS:
        raise ValueError(f"unknown variant tag {record.variant!r}")
    if record.solver not in ALL_SOLVERS:
        raise ValueError(f"unknown solver tag {record.solver!r}")
    value = validate_flow(instance, record)
    if value != instance.flow_value:
        raise WrongFlowValue(
            f"solution value {value} differs from required {instance.flow_value}"
        )
    lines = [f"o {record.variant} {record.solver} {record.robust_cost} {record.seed}"]
    for arc, v in zip(instance.network.arcs, record.values):
        if v != 0:
            lines.append(f"x {arc.tail} {arc.head} {v}")
    return "\n".join(lines) + "\n"


def parse_solution(text: str | bytes, instance: Instance) -> SolutionRecord:
    """Parse ``.sol`` text produced by `format_solution` and validate the flow."""
    if isinstance(text, (bytes, bytearray)):
        text = text.decode("ascii")
    network = instance.network
    arc_index = {(a.tail, a.head): i for i, a in enumerate(network.arcs)}
    values = [0] * network.arc_count
    head: tuple[str, str, int, int] | None = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        if parts[0] == "o":
            if head is not None:
                raise InstanceFormatError("duplicate solution header", lineno)
            if len(parts) != 5:
                raise InstanceFormatError("malformed solution header", lineno)
            variant, solver = parts[1], parts[2]
            if variant not in VARIANTS:
                raise InstanceFormatError(f"unknown variant tag {variant!r}", lineno)
            if solver not in ALL_SOLVERS:
                raise InstanceFormatError(f"unknown solver tag {solver!r}", lineno)
            try:
                head = (variant, solver, int(parts[3]), int(parts[4]))
            except ValueError:
                raise InstanceFormatError("malformed solution header", lineno) from None
        elif parts[0] == "x":
            if head is None:
                raise InstanceFormatError("value line before solution header", lineno)
            if len(parts) != 4:
                raise InstanceFormatError("malformed value line", lineno)
            tail, hd, v = (_int_token(t, "value field", lineno) for t in parts[1:])
            if (tail, hd) not in arc_index:
                raise InstanceFormatError(f"no arc {tail}->{hd} in the instance", lineno)
            values[arc_index[(tail, hd)]] = v
        else:
            raise InstanceFormatError(f"unknown line tag {parts[0]!r}", lineno)
    if head is None:
        raise InstanceFormatError("missing solution header")
    record = SolutionRecord(head[0], head[1], head[2], tuple(values), head[3])
    value = validate_flow(instance, record)
    if value != instance.flow_value:
        raise WrongFlowValue(
            f"solution value {value} differs from required {instance.flow_value}"
        )
    return record
