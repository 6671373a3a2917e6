"""Operations on hypers: priors, joint matrices, decomposition, reduction, collapse."""

from __future__ import annotations

import numpy as np
import structlog

from hyperqif.config import EPS_NORM
from hyperqif.core.channel import (
    Channel,
    JointDistribution,
    conditional_rows,
    make_channel,
    make_joint,
)
from hyperqif.core.distribution import Distribution, SecretSpace, make_distribution
from hyperqif.errors import DepthTooSmall
from hyperqif.hyper.model import HigherHyper, Hyper, Leaf, Node, hyper_from_matrix
from hyperqif.measures.gain import MeasureLike, as_measure

log = structlog.get_logger()


def prior_of(hyper: Hyper) -> Distribution:
    """The outer-weighted mixture of the inners."""
    return make_distribution(hyper.space, hyper.outer @ hyper.inner_matrix)


def point_hyper(dist: Distribution) -> Hyper:
    """The hyper with all outer mass on dist."""
    return hyper_from_matrix(dist.space, dist.probs[None, :], [1.0])


def joint_matrix(hyper: Hyper) -> JointDistribution:
    """The |X| x |inners| joint with column j equal to outer(j) * inner_j."""
    matrix = (hyper.inner_matrix * hyper.outer[:, None]).T
    return make_joint(hyper.space, hyper.strategies, matrix)


def from_joint(joint: JointDistribution, tol: float = EPS_NORM) -> Hyper:
    """Recover the hyper of a joint: outer = column sums, inners = normalized columns.

    Zero-mass columns are dropped along with their labels.
    """
    m = joint.matrix
    outer = m.sum(axis=0)
    keep = outer > 0
    cols = m[:, keep]
    weights = outer[keep]
    labels = SecretSpace(tuple(lab for lab, k in zip(joint.col_space, keep, strict=True) if k))
    inner_matrix = (cols / weights).T
    return hyper_from_matrix(joint.row_space, inner_matrix, weights, strategies=labels, tol=tol)


def decompose(hyper: Hyper) -> tuple[Distribution, Channel]:
    """Split a hyper into its prior and the channel Delta(i, j) = p(inner_j | x_i).

    Rows for secrets of prior probability 0 are uniform.
    """
    joint = joint_matrix(hyper).matrix
    prior = make_distribution(hyper.space, joint.sum(axis=1))
    delta = make_channel(hyper.space, hyper.strategies, conditional_rows(joint))
    return prior, delta


def reduce(hyper: Hyper, tol: float = EPS_NORM) -> Hyper:
    """Merge inners within L-infinity distance tol, summing their outer mass.

    The first inner of each group keeps its position and label. Label identity of the
    merged inners is lost.
    """
    reps: list[int] = []
    masses: list[float] = []
    for i, row in enumerate(hyper.inner_matrix):
        if hyper.outer[i] <= 0:
            continue
        for slot, r in enumerate(reps):
            if np.max(np.abs(hyper.inner_matrix[r] - row)) <= tol:
                masses[slot] += float(hyper.outer[i])
                break
        else:
            reps.append(i)
            masses.append(float(hyper.outer[i]))

    if len(reps) < len(hyper):
        log.debug("Reduced hyper", before=len(hyper), after=len(reps))
    return hyper_from_matrix(
        hyper.space,
        hyper.inner_matrix[reps],
        masses,
        strategies=[hyper.strategies.labels[r] for r in reps],
    )


def _leaves(h: HigherHyper, weight: float) -> list[tuple[Distribution, float]]:
    if isinstance(h, Leaf):
        return [(h.dist, weight)]
    out: list[tuple[Distribution, float]] = []
    for p, child in zip(h.outer, h.children, strict=True):
        out.extend(_leaves(child, weight * float(p)))
    return out


def collapse(h: HigherHyper) -> Hyper:
    """Flatten a higher-order hyper into a hyper over its leaves.

    Each leaf's outer weight is the product of outer probabilities along its path.

    Raises:
        DepthTooSmall: If h has depth below 2
    """
    if h.depth < 2:
        raise DepthTooSmall(f"collapse needs depth >= 2, got {h.depth}")
    pairs = _leaves(h, 1.0)
    space = h.space
    return hyper_from_matrix(
        space,
        np.vstack([dist.probs for dist, _ in pairs]),
        [w for _, w in pairs],
    )


def vulnerability_n(measure: MeasureLike, h: HigherHyper) -> float:
    """Order-n vulnerability: V on a leaf, the outer expectation of children otherwise."""
    v = as_measure(measure)
    if isinstance(h, Leaf):
        return v.evaluate(h.dist)
    assert isinstance(h, Node)
    total = 0.0
    for p, child in zip(h.outer, h.children, strict=True):
        total += float(p) * vulnerability_n(v, child)
    return total
