"""Rough-set attribute reduction: exact rough-set measures plus greedy,
exhaustive and swarm/evolutionary reduct searches."""

from .bee import BeeConfig, bee_objective, bee_rsar, bee_rsar_runs
from .core import (
    DecisionTable,
    InvalidSubsetError,
    SubsetEvaluator,
    TableError,
    decision_partition,
    dependency,
    dependency_fraction,
    entropy,
    lower_approx,
    partition,
    positive_region_size,
    regions,
    upper_approx,
)
from .deterministic import ReductOutcome, ReductSizeError, ebr, exhaustive_min_reduct, quick_reduct
from .metaheuristics import AntConfig, GaConfig, PsoConfig, ant_rsar, gen_rsar, pso_rsar

__version__ = "0.1.0"

__all__ = [
    "AntConfig", "BeeConfig", "DecisionTable", "GaConfig", "InvalidSubsetError", "PsoConfig",
    "ReductOutcome", "ReductSizeError", "SubsetEvaluator", "TableError", "ant_rsar",
    "bee_objective", "bee_rsar", "bee_rsar_runs", "decision_partition", "dependency",
    "dependency_fraction", "ebr", "entropy", "exhaustive_min_reduct", "gen_rsar",
    "lower_approx", "partition", "positive_region_size", "pso_rsar", "quick_reduct",
    "regions", "upper_approx",
]
