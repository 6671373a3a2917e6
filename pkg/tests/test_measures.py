"""Tests for gain functions and vulnerability measures."""

import numpy as np
import pytest

from hyperqif.core.channel import (
    identity_channel,
    make_joint,
    noninterferent_channel,
    push_through,
)
from hyperqif.core.distribution import SecretSpace, make_distribution
from hyperqif.errors import DimensionMismatch, InvalidGainFunction, SpaceMismatch
from hyperqif.hyper.algebra import decompose
from hyperqif.measures.gain import (
    VulnerabilityMeasure,
    builtin_gain,
    builtin_measure,
    identity_gain,
    make_gain,
)
from hyperqif.measures.vulnerability import (
    bayes_vulnerability,
    conditional_bayes,
    g_vulnerability,
    hyper_vulnerability,
    joint_bayes,
    optimal_guess,
    posterior_g_vulnerability,
)
from hyperqif.sampling import random_distribution, random_gain, random_hyper, random_space


class TestMakeGain:
    """Tests for gain function validation."""

    def test_shape_checked(self, space):
        """The gain matrix is |W| x |X|."""
        with pytest.raises(DimensionMismatch):
            make_gain(["w1"], space, [[1.0, 0.0, 0.0]])

    def test_non_finite_rejected(self, space):
        """Infinite gains are not allowed."""
        with pytest.raises(InvalidGainFunction):
            make_gain(["w1"], space, [[np.inf, 0.0]])

    def test_all_negative_column_rejected(self, space):
        """Some guess must gain at least 0 on every secret."""
        with pytest.raises(InvalidGainFunction):
            make_gain(["w1", "w2"], space, [[1.0, -1.0], [0.5, -0.1]])

    def test_negative_entries_allowed_when_column_has_nonnegative(self, space):
        """Negative gains are fine as long as each column has a non-negative entry."""
        gain = make_gain(["w1", "w2"], space, [[1.0, -1.0], [-0.5, 0.0]])
        assert gain.gain.shape == (2, 2)

    def test_builtin(self, space):
        """bayes and identity name the identity gain; other names are refused."""
        np.testing.assert_array_equal(builtin_gain("bayes", space).gain, np.eye(2))
        with pytest.raises(InvalidGainFunction):
            builtin_gain("shannon", space)
        with pytest.raises(InvalidGainFunction):
            builtin_measure("shannon")


class TestGVulnerability:
    """Tests for V_g, Bayes vulnerability and optimal guesses."""

    def test_weighted_gain_uniform(self, gain_b, space):
        """Guessing the valuable secret pays 4.75 on the uniform prior."""
        uniform = make_distribution(space, [1 / 2, 1 / 2])
        assert g_vulnerability(gain_b, uniform) == pytest.approx(4.75)

    def test_identity_gain_uniform(self, space):
        """Identity gain gives one chance in two."""
        uniform = make_distribution(space, [1 / 2, 1 / 2])
        assert g_vulnerability(identity_gain(space), uniform) == pytest.approx(0.5)

    def test_weighted_gain_skewed(self, gain_b, space):
        """0.95 for guessing x1 beats 0.475 for guessing x2.

        A value of 9 1/2 is sometimes quoted for this prior. The definition gives 0.95, the only
        value consistent with a strategy vulnerability of 38/39 and V_E = 195/200.
        """
        skewed = make_distribution(space, [19 / 20, 1 / 20])
        assert g_vulnerability(gain_b, skewed) == pytest.approx(0.95)
        assert optimal_guess(gain_b, skewed) == "x1"

    def test_space_mismatch(self, gain_b):
        """Gain and prior must share the secret space."""
        other = make_distribution(SecretSpace.of(["a", "b"]), [0.5, 0.5])
        with pytest.raises(SpaceMismatch):
            g_vulnerability(gain_b, other)
        with pytest.raises(SpaceMismatch):
            optimal_guess(gain_b, other)

    def test_bayes_examples(self, space):
        """Bayes vulnerability is the largest probability."""
        assert bayes_vulnerability(make_distribution(space, [1 / 2, 1 / 2])) == 0.5
        skewed = make_distribution(space, [19 / 20, 1 / 20])
        assert bayes_vulnerability(skewed) == pytest.approx(19 / 20)
        assert bayes_vulnerability(make_distribution(space, [1.0, 0.0])) == 1.0

    def test_optimal_guess_ties_to_lowest_index(self, space):
        """Equal expected gains resolve to the first guess."""
        gain = identity_gain(space)
        assert optimal_guess(gain, make_distribution(space, [1.0, 0.0])) == "x1"
        assert optimal_guess(gain, make_distribution(space, [1 / 2, 1 / 2])) == "x1"

    def test_bayes_equals_identity_gain_random(self):
        """Bayes and identity-gain V_g agree on random priors."""
        rng = np.random.default_rng(7)
        for _ in range(100):
            dist = random_distribution(rng, random_space(rng, max_secrets=6))
            assert g_vulnerability(identity_gain(dist.space), dist) == pytest.approx(
                bayes_vulnerability(dist), abs=1e-12
            )
            assert VulnerabilityMeasure.identity().evaluate(dist) == pytest.approx(
                VulnerabilityMeasure.bayes().evaluate(dist), abs=1e-12
            )

    def test_convexity_random(self):
        """V_g of a mixture is at most the mixture of V_g values."""
        rng = np.random.default_rng(11)
        for _ in range(200):
            space = random_space(rng)
            gain = random_gain(rng, space)
            p1 = random_distribution(rng, space)
            p2 = random_distribution(rng, space)
            lam = float(rng.random())
            mix = make_distribution(space, lam * p1.probs + (1 - lam) * p2.probs)
            bound = lam * g_vulnerability(gain, p1) + (1 - lam) * g_vulnerability(gain, p2)
            assert g_vulnerability(gain, mix) <= bound + 1e-9

    def test_value_matches_argmax(self):
        """V_g is the expected gain of the optimal guess."""
        rng = np.random.default_rng(13)
        for _ in range(100):
            space = random_space(rng)
            gain = random_gain(rng, space)
            dist = random_distribution(rng, space)
            w = gain.guesses.index(optimal_guess(gain, dist))
            expected = float(dist.probs @ gain.gain[w])
            assert g_vulnerability(gain, dist) == pytest.approx(expected, abs=1e-12)


class TestHyperVulnerability:
    """Tests for the outer expectation of a measure."""

    def test_bayes_env1(self, env1):
        """Each strategy is deterministic, so Bayes V is 1."""
        assert hyper_vulnerability(VulnerabilityMeasure.bayes(), env1) == pytest.approx(1.0)

    def test_bayes_env2(self, env2):
        """A single fair coin leaves 1/2."""
        assert hyper_vulnerability(VulnerabilityMeasure.bayes(), env2) == pytest.approx(0.5)

    def test_weighted_gain_env1(self, gain_b, env1):
        """Half the users pay 1 and half 9.5."""
        assert hyper_vulnerability(gain_b, env1) == pytest.approx(5.25)

    def test_space_mismatch(self, gain_b):
        """A gain over other secrets cannot score the hyper."""
        rng = np.random.default_rng(3)
        hyper = random_hyper(rng, SecretSpace.of(["a", "b"]))
        with pytest.raises(SpaceMismatch):
            hyper_vulnerability(gain_b, hyper)


class TestPosteriorVulnerability:
    """Tests for V_g[prior, C]."""

    def test_identity_channel(self, space):
        """A channel that reveals the secret leaves vulnerability 1."""
        uniform = make_distribution(space, [1 / 2, 1 / 2])
        v = posterior_g_vulnerability(identity_gain(space), uniform, identity_channel(space))
        assert v == pytest.approx(1.0)

    def test_noninterferent_channel(self, space):
        """A channel that reveals nothing leaves the prior vulnerability."""
        uniform = make_distribution(space, [1 / 2, 1 / 2])
        v = posterior_g_vulnerability(identity_gain(space), uniform, noninterferent_channel(space))
        assert v == pytest.approx(0.5)

    def test_decomposed_channel(self, three_inner_hyper):
        """Sum of column maxima of the joint: 1/4 + 1/4 + 1/4."""
        prior, delta = decompose(three_inner_hyper)
        v = posterior_g_vulnerability(identity_gain(prior.space), prior, delta)
        assert v == pytest.approx(3 / 4)
        assert posterior_g_vulnerability(
            VulnerabilityMeasure.bayes(), prior, delta
        ) == pytest.approx(3 / 4)

    def test_matches_hyper_vulnerability_random(self):
        """Posterior V_g equals V_g of the pushed-through hyper."""
        rng = np.random.default_rng(17)
        for _ in range(100):
            hyper = random_hyper(rng)
            prior, delta = decompose(hyper)
            gain = random_gain(rng, hyper.space)
            assert posterior_g_vulnerability(gain, prior, delta) == pytest.approx(
                hyper_vulnerability(gain, push_through(prior, delta)), abs=1e-9
            )


class TestChainRule:
    """Regression for the failure of the Bayes chain rule."""

    def test_joint_bayes_examples(self, space):
        """Bayes vulnerability of guessing both components."""
        assert joint_bayes(make_joint(space, space, [[0.5, 0.0], [0.0, 0.5]])) == 0.5
        assert joint_bayes(make_joint(space, space, [[0.25, 0.25], [0.25, 0.25]])) == 0.25

    def test_chain_rule_fails(self, chain_rule_joint):
        """V(X) = 3/4 and V(Y|X) = 3/4 but V(X, Y) = 1/2, not 9/16."""
        p_x = make_distribution(chain_rule_joint.row_space, chain_rule_joint.matrix.sum(axis=1))
        v_x = bayes_vulnerability(p_x)
        v_y_given_x = conditional_bayes(chain_rule_joint)
        v_xy = joint_bayes(chain_rule_joint)

        assert v_x == 3 / 4
        assert v_y_given_x == 3 / 4
        assert v_xy == 1 / 2
        assert v_x * v_y_given_x == 9 / 16
