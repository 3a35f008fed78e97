"""Exact analysis of discrete preference games on networks."""

from .core import (
    AnchoredInstance,
    AxiomViolation,
    GameError,
    Graph,
    Instance,
    Metric,
    TheoremViolation,
    cycle_metric,
    line_metric,
    make_metric,
    tree_metric,
)
from .costs import (
    CostBreakdown,
    anchored_player_cost,
    anchored_social_cost,
    contribution,
    player_cost,
    potential,
    social_cost,
)
from .dynamics import (
    Move,
    SearchTooLarge,
    Trace,
    best_responses,
    is_equilibrium,
    is_strong_equilibrium,
    potential_descent,
    social_responses,
    two_phase_schedule,
)
from .optimize import (
    AnalysisReport,
    analyze,
    anchored_pos_bound,
    brute_force_optimum,
    enumerate_equilibria,
    equilibrium_from_optimum_tree,
    equilibrium_from_optimum_two,
    lower_bound_curve,
    pos_upper_bound_two,
    potential_min_optimum,
    single_deviation_ratio,
)
from .treemed import (
    WeightedTree,
    build_response_tree,
    coherent_response,
    medians,
    separators,
)

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport",
    "analyze",
    "anchored_player_cost",
    "anchored_pos_bound",
    "anchored_social_cost",
    "AnchoredInstance",
    "AxiomViolation",
    "best_responses",
    "brute_force_optimum",
    "build_response_tree",
    "coherent_response",
    "contribution",
    "CostBreakdown",
    "cycle_metric",
    "enumerate_equilibria",
    "equilibrium_from_optimum_tree",
    "equilibrium_from_optimum_two",
    "GameError",
    "Graph",
    "Instance",
    "is_equilibrium",
    "is_strong_equilibrium",
    "line_metric",
    "lower_bound_curve",
    "make_metric",
    "medians",
    "Metric",
    "Move",
    "player_cost",
    "pos_upper_bound_two",
    "potential",
    "potential_descent",
    "potential_min_optimum",
    "SearchTooLarge",
    "separators",
    "single_deviation_ratio",
    "social_cost",
    "social_responses",
    "TheoremViolation",
    "Trace",
    "tree_metric",
    "two_phase_schedule",
    "WeightedTree",
]
