"""Shared fixtures: the small worked environments used across the test modules."""

from pathlib import Path

import pytest

from hyperqif.abstraction.aggregation import AggregationMatrix, deterministic_aggregation
from hyperqif.core.channel import JointDistribution, make_joint
from hyperqif.core.distribution import Distribution, SecretSpace, make_distribution
from hyperqif.hyper.algebra import point_hyper
from hyperqif.hyper.model import Hyper, hyper_from_matrix, make_hyper
from hyperqif.measures.gain import GainFunction, weighted_identity_gain

DATA_DIR = Path(__file__).parent / "data"

SIX_USER_INNERS = [
    [1.0, 0.0],
    [0.0, 1.0],
    [1 / 2, 1 / 2],
    [1 / 4, 3 / 4],
    [3 / 4, 1 / 4],
    [1 / 3, 2 / 3],
]
SIX_USER_OUTER = [1 / 10, 1 / 10, 2 / 10, 3 / 10, 2 / 10, 1 / 10]
STATES = ["A", "A", "B", "B", "C", "C"]


@pytest.fixture
def space() -> SecretSpace:
    return SecretSpace.of(["x1", "x2"])


@pytest.fixture
def sigma1(space: SecretSpace) -> Distribution:
    return make_distribution(space, [1.0, 0.0])


@pytest.fixture
def sigma2(space: SecretSpace) -> Distribution:
    return make_distribution(space, [0.0, 1.0])


@pytest.fixture
def sigma3(space: SecretSpace) -> Distribution:
    return make_distribution(space, [1 / 2, 1 / 2])


@pytest.fixture
def sigma4(space: SecretSpace) -> Distribution:
    return make_distribution(space, [9 / 10, 1 / 10])


@pytest.fixture
def env1(sigma1: Distribution, sigma2: Distribution) -> Hyper:
    """Each user picks a fixed secret; half pick x1, half x2."""
    return make_hyper([sigma1, sigma2], [1 / 2, 1 / 2])


@pytest.fixture
def env2(sigma3: Distribution) -> Hyper:
    """Every user flips a fair coin."""
    return point_hyper(sigma3)


@pytest.fixture
def env3(sigma1: Distribution, sigma4: Distribution) -> Hyper:
    return make_hyper([sigma1, sigma4], [1 / 2, 1 / 2])


@pytest.fixture
def gain_b(space: SecretSpace) -> GainFunction:
    """Adversary for whom x2 is worth 9.5 times as much as x1."""
    return weighted_identity_gain(space, [1.0, 9.5])


@pytest.fixture
def six_user_env(space: SecretSpace) -> Hyper:
    """Six users' strategies and their frequencies."""
    return hyper_from_matrix(space, SIX_USER_INNERS, SIX_USER_OUTER)


@pytest.fixture
def a_state(six_user_env: Hyper) -> AggregationMatrix:
    """Users 1-2 live in state A, 3-4 in B, 5-6 in C."""
    return deterministic_aggregation(six_user_env.strategies, ["A", "B", "C"], STATES)


@pytest.fixture
def model_f(space: SecretSpace) -> Hyper:
    """Per-state model of six_user_env."""
    return hyper_from_matrix(
        space,
        [[1 / 2, 1 / 2], [7 / 20, 13 / 20], [11 / 18, 7 / 18]],
        [2 / 10, 5 / 10, 3 / 10],
        strategies=["A", "B", "C"],
    )


@pytest.fixture
def three_inner_hyper(sigma1: Distribution, sigma2: Distribution, sigma3: Distribution) -> Hyper:
    return make_hyper([sigma1, sigma2, sigma3], [1 / 4, 1 / 4, 1 / 2])


@pytest.fixture
def chain_rule_joint(space: SecretSpace) -> JointDistribution:
    """Joint of X (rows) and Y (columns) on which the Bayes chain rule fails."""
    return make_joint(space, SecretSpace.of(["y1", "y2"]), [[1 / 2, 1 / 4], [0.0, 1 / 4]])


@pytest.fixture
def corpus_path() -> Path:
    """2000 synthetic word+year passwords with an independent random gender column."""
    return DATA_DIR / "synthetic_corpus.csv"
