"""Channels, joint distributions, and pushing a prior through a channel."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import TYPE_CHECKING, NamedTuple

import numpy as np

from hyperqif.config import EPS_NORM
from hyperqif.core.distribution import (
    Distribution,
    SecretSpace,
    frozen_array,
    make_distribution,
    require_same_space,
    validate_probability_vector,
)
from hyperqif.errors import (
    DimensionMismatch,
    NegativeProbability,
    NotNormalized,
    NotStochastic,
)

if TYPE_CHECKING:
    from hyperqif.hyper.model import Hyper


@dataclass(frozen=True, eq=False)
class Channel:
    """A row-stochastic matrix from input labels to output labels.

    Row i is the distribution of outputs when the input is input_space.labels[i].
    """

    input_space: SecretSpace
    output_space: SecretSpace
    matrix: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.input_space), len(self.output_space))

    @property
    def is_deterministic(self) -> bool:
        """True if every row puts all its mass on a single output."""
        return bool(np.all(np.isclose(self.matrix.max(axis=1), 1.0, rtol=0.0, atol=EPS_NORM)))

    def compose(self, other: Channel, tol: float = EPS_NORM) -> Channel:
        """Cascade self then other (matrix product self·other)."""
        if len(self.output_space) != len(other.input_space):
            raise DimensionMismatch(
                f"cannot cascade {self.shape} with {other.shape}: inner dimensions differ"
            )
        return make_channel(
            self.input_space, other.output_space, self.matrix @ other.matrix, tol=tol
        )


@dataclass(frozen=True, eq=False)
class JointDistribution:
    """A non-negative matrix summing to 1, rows and columns labeled."""

    row_space: SecretSpace
    col_space: SecretSpace
    matrix: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self.row_space), len(self.col_space))


class JointBreakdown(NamedTuple):
    """Marginals and conditionals of a joint distribution."""

    row_marginal: Distribution
    col_marginal: Distribution
    # p(col | row), one row per row label
    row_conditionals: Channel
    # p(row | col), one row per column label
    col_conditionals: Channel


def _as_matrix(
    matrix: np.ndarray | Sequence[Sequence[float]], shape: tuple[int, int]
) -> np.ndarray:
    arr = np.array(matrix, dtype=np.float64)
    if arr.ndim != 2 or arr.shape != shape:
        raise DimensionMismatch(f"matrix has shape {arr.shape}, expected {shape}")
    return arr


def make_channel(
    input_space: SecretSpace,
    output_space: SecretSpace,
    matrix: np.ndarray | Sequence[Sequence[float]],
    tol: float = EPS_NORM,
) -> Channel:
    """Validate a row-stochastic matrix and build a Channel.

    Raises:
        DimensionMismatch: If the matrix shape does not match the label sets
        NotStochastic: If some row is not a probability distribution within tol
    """
    arr = _as_matrix(matrix, (len(input_space), len(output_space)))
    rows = []
    for i, row in enumerate(arr):
        try:
            rows.append(validate_probability_vector(row, tol))
        except (NegativeProbability, NotNormalized) as e:
            raise NotStochastic(f"row {input_space.labels[i]!r}: {e}") from e
    return Channel(input_space, output_space, frozen_array(np.vstack(rows)))


def make_joint(
    row_space: SecretSpace,
    col_space: SecretSpace,
    matrix: np.ndarray | Sequence[Sequence[float]],
    tol: float = EPS_NORM,
) -> JointDistribution:
    """Validate a joint matrix (entries >= 0, total 1) and build a JointDistribution."""
    arr = _as_matrix(matrix, (len(row_space), len(col_space)))
    flat = validate_probability_vector(arr.ravel(), tol)
    return JointDistribution(row_space, col_space, frozen_array(flat.reshape(arr.shape)))


def identity_channel(space: SecretSpace) -> Channel:
    """The channel that reveals its input."""
    return make_channel(space, space, np.eye(len(space)))


def noninterferent_channel(space: SecretSpace, output: str = "0") -> Channel:
    """The single-column channel that reveals nothing."""
    return make_channel(space, SecretSpace((output,)), np.ones((len(space), 1)))


def joint_from(prior: Distribution, channel: Channel) -> JointDistribution:
    """Joint p(x, y) = prior(x) * C(x, y).

    Raises:
        SpaceMismatch: If the prior is not over the channel's input space
    """
    require_same_space(channel.input_space, prior.space, "prior")
    matrix = prior.probs[:, None] * channel.matrix
    return make_joint(channel.input_space, channel.output_space, matrix)


def conditional_rows(matrix: np.ndarray) -> np.ndarray:
    """Normalize each row of a non-negative matrix; zero rows become uniform."""
    totals = matrix.sum(axis=1, keepdims=True)
    width = matrix.shape[1]
    safe = np.where(totals > 0, totals, 1.0)
    return np.where(totals > 0, matrix / safe, 1.0 / width)


def marginals_and_conditionals(joint: JointDistribution) -> JointBreakdown:
    """Marginalize and condition a joint both ways.

    Conditionals on a zero-probability outcome are uniform.
    """
    m = joint.matrix
    row_marginal = make_distribution(joint.row_space, m.sum(axis=1))
    col_marginal = make_distribution(joint.col_space, m.sum(axis=0))
    row_cond = make_channel(joint.row_space, joint.col_space, conditional_rows(m))
    col_cond = make_channel(joint.col_space, joint.row_space, conditional_rows(m.T))
    return JointBreakdown(row_marginal, col_marginal, row_cond, col_cond)


def push_through(prior: Distribution, channel: Channel) -> Hyper:
    """The hyper [prior, channel]: outer p(y), inners p(x | y).

    Output columns with p(y) = 0 are dropped.

    Raises:
        SpaceMismatch: If the prior is not over the channel's input space
    """
    # Import here to avoid a circular import; hyper builds on core
    from hyperqif.hyper.algebra import from_joint

    return from_joint(joint_from(prior, channel))
