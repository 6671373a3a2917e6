"""Seeded random instances for property checks.

All generators take a numpy Generator so that a single seed reproduces a whole corpus.
"""

from __future__ import annotations

import numpy as np

from hyperqif.abstraction.aggregation import AggregationMatrix
from hyperqif.core.channel import make_channel
from hyperqif.core.distribution import Distribution, SecretSpace, make_distribution
from hyperqif.hyper.model import HigherHyper, Hyper, Leaf, hyper_from_matrix, make_node
from hyperqif.measures.gain import GainFunction, make_gain

MAX_SECRETS = 5
MAX_INNERS = 6


def random_space(rng: np.random.Generator, max_secrets: int = MAX_SECRETS) -> SecretSpace:
    return SecretSpace.indexed(int(rng.integers(2, max_secrets + 1)))


def random_probs(rng: np.random.Generator, n: int, sparse_rate: float = 0.2) -> np.ndarray:
    """A Dirichlet(1) vector; with probability sparse_rate some entries are zeroed."""
    probs = rng.dirichlet(np.ones(n))
    if n > 1 and rng.random() < sparse_rate:
        zeros = rng.choice(n, size=int(rng.integers(1, n)), replace=False)
        probs[zeros] = 0.0
        probs /= probs.sum()
    return probs


def random_distribution(rng: np.random.Generator, space: SecretSpace) -> Distribution:
    return make_distribution(space, random_probs(rng, len(space)))


def random_hyper(
    rng: np.random.Generator,
    space: SecretSpace | None = None,
    max_inners: int = MAX_INNERS,
) -> Hyper:
    """Random environment with 1..max_inners inners, all of positive outer weight."""
    space = space if space is not None else random_space(rng)
    k = int(rng.integers(1, max_inners + 1))
    inners = np.vstack([random_probs(rng, len(space)) for _ in range(k)])
    return hyper_from_matrix(space, inners, rng.dirichlet(np.ones(k)))


def random_gain(
    rng: np.random.Generator, space: SecretSpace, max_guesses: int = 4
) -> GainFunction:
    """Non-negative gain function with 1..max_guesses guesses and entries in [0, 2)."""
    n_guesses = int(rng.integers(1, max_guesses + 1))
    return make_gain(
        SecretSpace.indexed(n_guesses, prefix="w"),
        space,
        rng.uniform(0.0, 2.0, size=(n_guesses, len(space))),
    )


def random_aggregation(
    rng: np.random.Generator,
    hyper: Hyper,
    max_outputs: int = MAX_INNERS,
    deterministic_rate: float = 0.3,
) -> AggregationMatrix:
    """Row-stochastic matrix from hyper's inners to 1..max_outputs abstract strategies."""
    k_out = int(rng.integers(1, max_outputs + 1))
    if rng.random() < deterministic_rate:
        matrix = np.zeros((len(hyper), k_out))
        matrix[np.arange(len(hyper)), rng.integers(0, k_out, size=len(hyper))] = 1.0
    else:
        matrix = np.vstack([random_probs(rng, k_out) for _ in range(len(hyper))])
    return make_channel(hyper.strategies, SecretSpace.indexed(k_out, prefix="m"), matrix)


def random_higher_hyper(
    rng: np.random.Generator,
    space: SecretSpace,
    depth: int,
    max_fanout: int = 3,
) -> HigherHyper:
    """Uniform-depth random tree of the given depth (1 is a leaf)."""
    if depth == 1:
        return Leaf(random_distribution(rng, space))
    fanout = int(rng.integers(1, max_fanout + 1))
    children = [random_higher_hyper(rng, space, depth - 1, max_fanout) for _ in range(fanout)]
    return make_node(rng.dirichlet(np.ones(fanout)), children)
