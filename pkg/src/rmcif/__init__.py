"""Robust minimum-cost integer flow: solvers, generator, and harness.

The problem: send a required integer amount from source to sink at
minimum cost when the arc costs are uncertain, given as a finite set of
scenarios.  Two robust objectives are supported: the worst-case cost over
the scenarios (absolute, min-max) and the worst-case regret against each
scenario's own optimum (deviation, min-max regret).
"""
from .bench import (
    BenchReport,
    BenchRow,
    SolverSummary,
    run_bench,
    solve_one,
    summary_table,
    write_csv,
)
from .core import (
    ABSOLUTE,
    ALL_SOLVERS,
    DEVIATION,
    EC_SOLVERS,
    HEURISTIC_SOLVERS,
    LS_SOLVERS,
    VARIANTS,
    Arc,
    CapacityViolation,
    ConservationViolation,
    FractionalFlow,
    Instance,
    InstanceFormatError,
    IntegerFlow,
    Network,
    PseudoFlow,
    RmcifError,
    ScenarioSet,
    SolutionRecord,
    UnitFlow,
    WrongFlowValue,
    check_arc_values,
    flow_cost,
    flow_value_of,
    format_solution,
    parse_instance,
    parse_solution,
    validate_flow,
    write_instance,
)
from .exact import BudgetExceeded, enumerate_optimum, export_lp
from .flow_ops import (
    AlreadyMaximal,
    DegenerateCirculation,
    TargetUnreachable,
    augment,
    center,
    compose,
    cost_reduce,
    decompose,
    find_flow,
    harmonize,
    max_flow_value,
    min_cost_flow,
    perturb,
    round_flow,
    sum_flows,
)
from .generator import GenerationError, GeneratorSpec, generate
from .heuristics import SearchParams, evolutionary, local_search, make_rng
from .objectives import (
    ScenarioOptima,
    compute_optima,
    eval_absolute,
    eval_deviation,
    make_criterion,
)

__version__ = "0.1.0"

__all__ = [
    "ABSOLUTE",
    "ALL_SOLVERS",
    "DEVIATION",
    "EC_SOLVERS",
    "HEURISTIC_SOLVERS",
    "LS_SOLVERS",
    "VARIANTS",
    "AlreadyMaximal",
    "Arc",
    "BenchReport",
    "BenchRow",
    "BudgetExceeded",
    "CapacityViolation",
    "ConservationViolation",
    "DegenerateCirculation",
    "FractionalFlow",
    "GenerationError",
    "GeneratorSpec",
    "Instance",
    "InstanceFormatError",
    "IntegerFlow",
    "Network",
    "PseudoFlow",
    "RmcifError",
    "ScenarioOptima",
    "ScenarioSet",
    "SearchParams",
    "SolutionRecord",
    "SolverSummary",
    "TargetUnreachable",
    "UnitFlow",
    "WrongFlowValue",
    "augment",
    "center",
    "compose",
    "compute_optima",
    "cost_reduce",
    "decompose",
    "enumerate_optimum",
    "eval_absolute",
    "eval_deviation",
    "evolutionary",
    "export_lp",
    "find_flow",
    "check_arc_values",
    "flow_cost",
    "flow_value_of",
    "format_solution",
    "generate",
    "harmonize",
    "local_search",
    "make_criterion",
    "make_rng",
    "max_flow_value",
    "min_cost_flow",
    "parse_instance",
    "parse_solution",
    "perturb",
    "round_flow",
    "run_bench",
    "solve_one",
    "sum_flows",
    "summary_table",
    "validate_flow",
    "write_csv",
    "write_instance",
    "__version__",
]
