"""Vulnerability of an environment against an adversary holding an abstract model of it."""

from __future__ import annotations

import numpy as np

from hyperqif.abstraction.aggregation import AggregationMatrix, as_aggregation
from hyperqif.abstraction.refinement import require_abstraction
from hyperqif.config import EPS_FEAS, EPS_NORM
from hyperqif.envanalysis import SecurityDecomposition, vulnerability_ratio
from hyperqif.errors import InconsistentResult
from hyperqif.hyper.algebra import joint_matrix
from hyperqif.hyper.model import Hyper
from hyperqif.measures.gain import MeasureLike, as_measure
from hyperqif.measures.vulnerability import hyper_vulnerability


def model_vulnerability(
    measure: MeasureLike,
    env: Hyper,
    aggregation: AggregationMatrix | np.ndarray,
    tol: float = EPS_NORM,
) -> float:
    """V(M|E) with M = E.A.

    For each abstract strategy the adversary plays the optimal guess against that
    abstract inner; the guess is scored against the true inners of E, weighted by
    E(sigma) * A(sigma, varsigma).

    Raises:
        DimensionMismatch: If A's row count differs from the number of inners of env
        NotStochastic: If A is a raw matrix that is not row-stochastic
        SpaceMismatch: If a g-measure is over a different space than env
    """
    v = as_measure(measure)
    v.check_space(env.space)
    agg = as_aggregation(env, aggregation, tol)
    gain = v.gain_for(env.space)

    abstract_joint = joint_matrix(env).matrix @ agg.matrix
    mass = abstract_joint.sum(axis=0)
    used = mass > 0
    abstract_inners = (abstract_joint[:, used] / mass[used]).T
    guesses = gain.best_guess_indices(abstract_inners)

    true_gains = gain.expected_gains(env.inner_matrix)[:, guesses]
    per_strategy = (agg.matrix[:, used] * true_gains).sum(axis=1)
    return float(env.outer @ per_strategy)


def model_vulnerability_of(
    measure: MeasureLike, env: Hyper, model: Hyper, tol: float = EPS_FEAS
) -> float:
    """V(M|E) when only the model is known; a witness A is found first.

    Raises:
        NotAnAbstraction: If model is not an abstraction of env
    """
    witness = require_abstraction(model, env, tol)
    return model_vulnerability(measure, env, witness, tol=tol)


def strategy_vulnerability_given(
    measure: MeasureLike, env: Hyper, model: Hyper, tol: float = EPS_FEAS
) -> float:
    """V_S(M|E) = V_E(M) / V_E(E), between V_S(E) and 1.

    Raises:
        NotAnAbstraction: If model is not an abstraction of env
        ZeroEnvironmentalVulnerability: If V_E(env) is 0
    """
    require_abstraction(model, env, tol)
    v = as_measure(measure)
    return vulnerability_ratio(
        hyper_vulnerability(v, model),
        hyper_vulnerability(v, env),
        "strategy vulnerability given a model",
    )


def refinement_ratio(
    measure: MeasureLike,
    env: Hyper,
    model: Hyper,
    coarser: Hyper,
    tol: float = EPS_FEAS,
) -> float:
    """Gain in accuracy from holding model rather than the coarser one.

    V_S(coarser|E) / V_S(model|E), which must equal V_E(coarser) / V_E(model).

    Raises:
        NotAnAbstraction: Unless coarser <= model <= env
        ZeroEnvironmentalVulnerability: If V_E(env) or V_E(model) is 0
        InconsistentResult: If the two routes to the ratio disagree
    """
    require_abstraction(model, env, tol)
    require_abstraction(coarser, model, tol)
    v = as_measure(measure)
    v_env = hyper_vulnerability(v, env)
    v_model = hyper_vulnerability(v, model)
    v_coarser = hyper_vulnerability(v, coarser)

    direct = vulnerability_ratio(v_coarser, v_model, "refinement ratio")
    given_model = vulnerability_ratio(v_model, v_env, "refinement ratio")
    given_coarser = vulnerability_ratio(v_coarser, v_env, "refinement ratio")
    via_strategy = given_coarser / given_model
    if abs(direct - via_strategy) > EPS_NORM:
        raise InconsistentResult(f"refinement ratio {direct} != {via_strategy}")
    return direct


def decompose_given(
    measure: MeasureLike, env: Hyper, model: Hyper, tol: float = EPS_FEAS
) -> SecurityDecomposition:
    """V(M|E) split as V_S(M|E) x V_E(E).

    Raises:
        NotAnAbstraction: If model is not an abstraction of env
        ZeroEnvironmentalVulnerability: If V_E(env) is 0
    """
    require_abstraction(model, env, tol)
    v = as_measure(measure)
    by_strategy = hyper_vulnerability(v, env)
    perceived = hyper_vulnerability(v, model)
    by_aggregation = vulnerability_ratio(perceived, by_strategy, "decomposition given a model")
    return SecurityDecomposition(
        measure=v.name,
        perceived=perceived,
        by_aggregation=by_aggregation,
        by_strategy=by_strategy,
    )
