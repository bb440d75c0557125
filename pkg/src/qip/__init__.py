"""Local search and tabu search for general quadratic integer programs."""

from .generate import GeneratorConfig, derive_rhs, generate
from .local_search import (
    best_value_constrained,
    best_value_unconstrained,
    is_one_opt_local_optimum,
    one_opt,
    random_sequence,
    round_to_candidate,
)
from .model import (
    InfeasibleMoveError,
    InstanceError,
    QipInstance,
    SearchState,
    compute_interactions,
    compute_slacks,
    headroom,
    is_feasible,
    objective,
    partial_value,
)
from .tabu import TsosConfig, tsos

__all__ = [
    "GeneratorConfig",
    "InfeasibleMoveError",
    "InstanceError",
    "QipInstance",
    "SearchState",
    "TsosConfig",
    "best_value_constrained",
    "best_value_unconstrained",
    "compute_interactions",
    "compute_slacks",
    "derive_rhs",
    "generate",
    "headroom",
    "is_feasible",
    "is_one_opt_local_optimum",
    "objective",
    "one_opt",
    "partial_value",
    "random_sequence",
    "round_to_candidate",
    "tsos",
]
