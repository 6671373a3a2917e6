"""Hyper-distributions and higher-order hypers."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

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
from hyperqif.errors import DimensionMismatch, LengthMismatch, NotStochastic, RaggedHyper


@dataclass(frozen=True, eq=False)
class Hyper:
    """A distribution over inner distributions on one secret space.

    Doubles as an environment (a distribution on strategies) and as an adversary's model.
    Inners are stored densely as the rows of inner_matrix; strategies labels the rows.
    """

    space: SecretSpace
    outer: np.ndarray
    inner_matrix: np.ndarray
    strategies: SecretSpace

    @property
    def inners(self) -> tuple[Distribution, ...]:
        return tuple(make_distribution(self.space, row) for row in self.inner_matrix)

    def items(self) -> list[tuple[Distribution, float]]:
        """(inner, outer probability) pairs in construction order."""
        return list(zip(self.inners, (float(p) for p in self.outer), strict=True))

    def __len__(self) -> int:
        return len(self.outer)

    def __repr__(self) -> str:
        parts = ", ".join(f"{inner!r}@{p:.6g}" for inner, p in self.items())
        return f"Hyper({parts})"


def default_strategy_labels(k: int) -> SecretSpace:
    return SecretSpace.indexed(k, prefix="s")


def hyper_from_matrix(
    space: SecretSpace,
    inner_matrix: np.ndarray | Sequence[Sequence[float]],
    outer: np.ndarray | Sequence[float],
    *,
    strategies: SecretSpace | Sequence[str] | None = None,
    drop_zero: bool = True,
    tol: float = EPS_NORM,
) -> Hyper:
    """Build a Hyper from a (k, n) matrix of inner rows and k outer weights.

    Raises:
        DimensionMismatch: If the matrix does not have one column per secret
        LengthMismatch: If outer or strategies do not have one entry per inner
        NotStochastic: If an inner row is not a distribution
    """
    inner_arr = np.array(inner_matrix, dtype=np.float64)
    if inner_arr.ndim != 2 or inner_arr.shape[1] != len(space):
        raise DimensionMismatch(
            f"inner matrix has shape {inner_arr.shape}, expected (k, {len(space)})"
        )
    outer_arr = np.asarray(outer, dtype=np.float64)
    if outer_arr.shape != (inner_arr.shape[0],):
        raise LengthMismatch(f"{outer_arr.size} outer weights for {inner_arr.shape[0]} inners")
    outer_arr = validate_probability_vector(outer_arr, tol)

    if strategies is None:
        labels = default_strategy_labels(len(outer_arr))
    elif isinstance(strategies, SecretSpace):
        labels = strategies
    else:
        labels = SecretSpace.of(strategies)
    if len(labels) != len(outer_arr):
        raise LengthMismatch(f"{len(labels)} strategy labels for {len(outer_arr)} inners")

    rows = []
    for i, row in enumerate(inner_arr):
        try:
            rows.append(validate_probability_vector(row, tol))
        except ValueError as e:
            raise NotStochastic(f"inner {labels.labels[i]!r}: {e}") from e
    inner_arr = np.vstack(rows)

    if drop_zero:
        keep = outer_arr > 0
        if not np.all(keep):
            inner_arr = inner_arr[keep]
            outer_arr = outer_arr[keep]
            labels = SecretSpace(tuple(lab for lab, k in zip(labels, keep, strict=True) if k))

    return Hyper(
        space=space,
        outer=frozen_array(outer_arr),
        inner_matrix=frozen_array(inner_arr),
        strategies=labels,
    )


def make_hyper(
    inners: Sequence[Distribution],
    outer: np.ndarray | Sequence[float],
    *,
    strategies: SecretSpace | Sequence[str] | None = None,
    drop_zero: bool = True,
    tol: float = EPS_NORM,
) -> Hyper:
    """Build a Hyper from inner distributions and their outer probabilities.

    Inners with outer probability 0 are dropped unless drop_zero is False.

    Raises:
        LengthMismatch: If there are no inners or outer has the wrong length
        SpaceMismatch: If the inners are over different spaces
    """
    if not inners:
        raise LengthMismatch("a hyper needs at least one inner")
    space = inners[0].space
    for inner in inners[1:]:
        require_same_space(space, inner.space, "inner")
    return hyper_from_matrix(
        space,
        np.vstack([inner.probs for inner in inners]),
        outer,
        strategies=strategies,
        drop_zero=drop_zero,
        tol=tol,
    )


@dataclass(frozen=True, eq=False)
class Leaf:
    """Order-1 hyper: a plain distribution."""

    dist: Distribution

    @property
    def depth(self) -> int:
        return 1

    @property
    def space(self) -> SecretSpace:
        return self.dist.space


@dataclass(frozen=True, eq=False)
class Node:
    """Order-n hyper: a distribution over order-(n-1) children of uniform depth."""

    outer: np.ndarray
    children: tuple[HigherHyper, ...]

    @property
    def depth(self) -> int:
        return self.children[0].depth + 1

    @property
    def space(self) -> SecretSpace:
        return self.children[0].space


HigherHyper = Leaf | Node


def make_node(
    outer: np.ndarray | Sequence[float],
    children: Sequence[HigherHyper],
    tol: float = EPS_NORM,
) -> Node:
    """Validate and build a Node.

    Raises:
        LengthMismatch: If outer and children differ in length or are empty
        RaggedHyper: If children differ in depth or secret space
    """
    if not children:
        raise LengthMismatch("a node needs at least one child")
    outer_arr = np.asarray(outer, dtype=np.float64)
    if outer_arr.shape != (len(children),):
        raise LengthMismatch(f"{outer_arr.size} outer weights for {len(children)} children")
    depth = children[0].depth
    space = children[0].space
    for child in children[1:]:
        if child.depth != depth:
            raise RaggedHyper(f"sibling depths {depth} and {child.depth} differ")
        if child.space != space:
            raise RaggedHyper("siblings are over different secret spaces")
    return Node(frozen_array(validate_probability_vector(outer_arr, tol)), tuple(children))


def as_higher(hyper: Hyper) -> Node:
    """View a Hyper as a depth-2 higher-order hyper."""
    return make_node(hyper.outer, [Leaf(inner) for inner in hyper.inners])
