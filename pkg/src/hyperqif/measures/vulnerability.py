"""g-vulnerability, Bayes vulnerability, optimal guesses and posterior vulnerability."""

from __future__ import annotations

import numpy as np

from hyperqif.core.channel import Channel, JointDistribution
from hyperqif.core.distribution import Distribution, require_same_space
from hyperqif.hyper.model import Hyper
from hyperqif.measures.gain import GainFunction, MeasureLike, as_measure


def g_vulnerability(gain: GainFunction, prior: Distribution) -> float:
    """V_g(prior) = max over guesses w of sum_x prior(x) * g(w, x).

    Raises:
        SpaceMismatch: If gain and prior are over different spaces
    """
    require_same_space(gain.space, prior.space, "prior")
    return float(gain.expected_gains(prior.probs).max())


def bayes_vulnerability(prior: Distribution) -> float:
    """Probability of guessing the secret in one try: the largest entry."""
    return float(prior.probs.max())


def optimal_guess(gain: GainFunction, prior: Distribution) -> str:
    """Label of the guess maximizing expected gain; ties go to the lowest guess index.

    Raises:
        SpaceMismatch: If gain and prior are over different spaces
    """
    require_same_space(gain.space, prior.space, "prior")
    return gain.guesses.labels[int(gain.best_guess_indices(prior.probs)[0])]


def hyper_vulnerability(measure: MeasureLike, hyper: Hyper) -> float:
    """Outer expectation of the measure over the inners.

    Raises:
        SpaceMismatch: If a g-measure is over a different space than the hyper
    """
    v = as_measure(measure)
    v.check_space(hyper.space)
    return float(hyper.outer @ v.evaluate_rows(hyper.space, hyper.inner_matrix))


def posterior_g_vulnerability(measure: MeasureLike, prior: Distribution, channel: Channel) -> float:
    """Sum over outputs y of max_w sum_x prior(x) C(x, y) g(w, x).

    Raises:
        SpaceMismatch: If prior, channel and gain do not share the secret space
    """
    require_same_space(channel.input_space, prior.space, "prior")
    v = as_measure(measure)
    joint = prior.probs[:, None] * channel.matrix
    if v.kind == "bayes":
        return float(joint.max(axis=0).sum())
    gain = v.gain_for(prior.space)
    return float((gain.gain @ joint).max(axis=0).sum())


def joint_bayes(joint: JointDistribution) -> float:
    """Bayes vulnerability of guessing the (row, column) pair: the largest joint entry."""
    return float(joint.matrix.max())


def conditional_bayes(joint: JointDistribution) -> float:
    """Bayes vulnerability of the column given the row: sum over rows of the row maximum."""
    return float(np.asarray(joint.matrix).max(axis=1).sum())
