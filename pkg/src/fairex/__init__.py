"""Exact pure-equilibrium solvers for the fair data-exchange game."""

from .continuous import solve_max, solve_min
from .corpus import NamedExample, example_names, load_example
from .discrete import solve_discrete
from .graph import solve_graph
from .io import load_instance, loads_instance
from .levels import k_level, level_table, min_k_level, outside_closure
from .mechanism import (
    Report,
    audit_truthfulness,
    model3_exploit_search,
    realize,
    recommend,
    truthful_reports,
)
from .model import (
    CONTINUOUS,
    DISCRETE,
    AgentSpec,
    BenefitFunction,
    DomainError,
    FairexError,
    Instance,
    InvalidInstance,
    InvalidProfile,
    RankPair,
    eval_benefit,
    ranks,
    right_derivative,
    total_data,
    utilities,
    utility,
)
from .result import EquilibriumResult
from .transforms import InfeasibleTotalProfile, phi_forward, phi_inverse
from .verifier import (
    GuardExceeded,
    best_response,
    check_local_conditions,
    deviation_oracle,
    extremality_probe,
    pareto_scan,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
