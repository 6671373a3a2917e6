"""Deciding whether one hyper is an abstraction of another."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import structlog

from hyperqif.abstraction.aggregation import AggregationMatrix
from hyperqif.abstraction.simplex import solve_feasibility
from hyperqif.config import EPS_FEAS
from hyperqif.core.channel import conditional_rows, make_channel
from hyperqif.core.distribution import require_same_space
from hyperqif.errors import NotAnAbstraction
from hyperqif.hyper.algebra import joint_matrix
from hyperqif.hyper.model import Hyper

log = structlog.get_logger()


@dataclass(frozen=True)
class RefinementWitness:
    """Result of an abstraction check.

    matrix is one aggregation A with [[E]] A = [[M]] when holds is true. It is the
    basic solution the simplex reached and need not be the only one.
    """

    holds: bool
    matrix: AggregationMatrix | None
    residual: float


def _constraints(model: Hyper, env: Hyper) -> tuple[np.ndarray, np.ndarray]:
    # Variables are A flattened row-major: A[i, j] sits at i * k_model + j.
    k_env, k_model = len(env), len(model)
    joint_env = joint_matrix(env).matrix
    joint_model = joint_matrix(model).matrix
    row_sums = np.kron(np.eye(k_env), np.ones((1, k_model)))
    products = np.kron(joint_env, np.eye(k_model))
    a_eq = np.vstack([row_sums, products])
    b_eq = np.concatenate([np.ones(k_env), joint_model.ravel()])
    return a_eq, b_eq


def check_abstracts(model: Hyper, env: Hyper, tol: float = EPS_FEAS) -> RefinementWitness:
    """Search for a row-stochastic A with [[env]] A = [[model]].

    Args:
        model: Candidate abstraction M
        env: Concrete hyper E
        tol: Feasibility tolerance on the max-norm residual

    Returns:
        RefinementWitness; on failure matrix is None and residual is that of the best
        point the solver reached

    Raises:
        SpaceMismatch: If model and env are over different secret spaces
    """
    require_same_space(env.space, model.space, "model")
    a_eq, b_eq = _constraints(model, env)
    result = solve_feasibility(a_eq, b_eq, tol=tol)

    candidate = conditional_rows(np.clip(result.x, 0.0, None).reshape(len(env), len(model)))
    residual = float(
        np.max(np.abs(joint_matrix(env).matrix @ candidate - joint_matrix(model).matrix))
    )
    # A basic solution can satisfy the system even when the solver stopped on its pivot limit
    holds = residual <= tol
    log.debug(
        "Checked abstraction",
        holds=holds,
        residual=residual,
        status=result.status,
        env_inners=len(env),
        model_inners=len(model),
    )
    if not holds:
        return RefinementWitness(holds=False, matrix=None, residual=residual)
    witness = make_channel(env.strategies, model.strategies, candidate, tol=tol)
    return RefinementWitness(holds=True, matrix=witness, residual=residual)


def require_abstraction(model: Hyper, env: Hyper, tol: float = EPS_FEAS) -> AggregationMatrix:
    """The witness A for model being an abstraction of env.

    Raises:
        NotAnAbstraction: If no aggregation matrix turns env into model
        SpaceMismatch: If model and env are over different secret spaces
    """
    witness = check_abstracts(model, env, tol)
    if not witness.holds or witness.matrix is None:
        raise NotAnAbstraction(
            f"model of {len(model)} inners is not an abstraction of the environment "
            f"(residual {witness.residual:.3g})"
        )
    return witness.matrix
