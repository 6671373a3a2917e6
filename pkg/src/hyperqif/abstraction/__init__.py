"""Abstractions of environments and the adversary models they induce."""

from hyperqif.abstraction.aggregation import (
    AggregationMatrix,
    apply_aggregation,
    as_aggregation,
    deterministic_aggregation,
)
from hyperqif.abstraction.refinement import RefinementWitness, check_abstracts, require_abstraction
from hyperqif.abstraction.relative import (
    decompose_given,
    model_vulnerability,
    model_vulnerability_of,
    refinement_ratio,
    strategy_vulnerability_given,
)
from hyperqif.abstraction.simplex import FeasibilityResult, solve_feasibility

__all__ = [
    "AggregationMatrix",
    "apply_aggregation",
    "as_aggregation",
    "deterministic_aggregation",
    "RefinementWitness",
    "check_abstracts",
    "require_abstraction",
    "model_vulnerability",
    "model_vulnerability_of",
    "strategy_vulnerability_given",
    "refinement_ratio",
    "decompose_given",
    "FeasibilityResult",
    "solve_feasibility",
]
