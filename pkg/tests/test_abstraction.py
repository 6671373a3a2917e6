"""Tests for aggregation, abstraction checks and model-relative vulnerability."""

import numpy as np
import pytest

from hyperqif.abstraction.aggregation import (
    apply_aggregation,
    as_aggregation,
    deterministic_aggregation,
)
from hyperqif.abstraction.refinement import check_abstracts, require_abstraction
from hyperqif.abstraction.relative import (
    decompose_given,
    model_vulnerability,
    model_vulnerability_of,
    refinement_ratio,
    strategy_vulnerability_given,
)
from hyperqif.config import EPS_FEAS
from hyperqif.core.channel import identity_channel, make_channel, noninterferent_channel
from hyperqif.core.distribution import SecretSpace, make_distribution
from hyperqif.envanalysis import environmental_vulnerability, strategy_vulnerability
from hyperqif.errors import DimensionMismatch, NotAnAbstraction, NotStochastic, SpaceMismatch
from hyperqif.hyper.algebra import joint_matrix, point_hyper, prior_of
from hyperqif.hyper.model import hyper_from_matrix
from hyperqif.measures.gain import VulnerabilityMeasure
from hyperqif.measures.vulnerability import hyper_vulnerability
from hyperqif.sampling import random_aggregation, random_gain, random_hyper

BAYES = VulnerabilityMeasure.bayes()

V_E_SIX_USERS = 1 / 10 + 1 / 10 + 2 / 10 * 1 / 2 + 3 / 10 * 3 / 4 + 2 / 10 * 3 / 4 + 1 / 10 * 2 / 3
V_E_MODEL_F = 2 / 10 * 1 / 2 + 5 / 10 * 13 / 20 + 3 / 10 * 11 / 18


class TestApplyAggregation:
    """Tests for H.A."""

    def test_state_aggregation_gives_model_f(self, six_user_env, a_state, model_f):
        """Grouping users by state yields the per-state model."""
        model = apply_aggregation(six_user_env, a_state)
        assert model.strategies.labels == ("A", "B", "C")
        np.testing.assert_allclose(model.outer, model_f.outer, atol=1e-12)
        np.testing.assert_allclose(model.inner_matrix, model_f.inner_matrix, atol=1e-12)
        np.testing.assert_allclose(
            joint_matrix(six_user_env).matrix @ a_state.matrix,
            joint_matrix(model_f).matrix,
            atol=1e-12,
        )

    def test_identity_gives_environment(self, six_user_env):
        """The identity aggregation changes nothing."""
        model = apply_aggregation(six_user_env, identity_channel(six_user_env.strategies))
        np.testing.assert_allclose(model.outer, six_user_env.outer)
        np.testing.assert_allclose(model.inner_matrix, six_user_env.inner_matrix)

    def test_noninterferent_gives_point_hyper(self, six_user_env):
        """Aggregating everything gives the point hyper on the prior."""
        model = apply_aggregation(six_user_env, noninterferent_channel(six_user_env.strategies))
        assert len(model) == 1
        np.testing.assert_allclose(model.inner_matrix[0], [11 / 24, 13 / 24], atol=1e-12)

    def test_raw_matrix_accepted(self, env1):
        """A plain matrix is labeled m1..mk."""
        model = apply_aggregation(env1, np.array([[0.5, 0.5], [0.0, 1.0]]))
        assert model.strategies.labels == ("m1", "m2")
        np.testing.assert_allclose(model.outer, [1 / 4, 3 / 4])

    def test_wrong_row_count(self, env1, six_user_env):
        """A has one row per inner of H."""
        with pytest.raises(DimensionMismatch):
            apply_aggregation(env1, np.ones((3, 1)))
        with pytest.raises(DimensionMismatch):
            apply_aggregation(env1, identity_channel(six_user_env.strategies))

    def test_not_stochastic(self, env1):
        """Rows of A are distributions."""
        with pytest.raises(NotStochastic):
            apply_aggregation(env1, np.array([[0.5, 0.6], [0.0, 1.0]]))

    def test_unused_abstract_strategy_dropped(self, env1):
        """Abstract strategies that receive no mass are not inners."""
        model = apply_aggregation(env1, np.array([[1.0, 0.0, 0.0], [1.0, 0.0, 0.0]]))
        assert model.strategies.labels == ("m1",)

    def test_deterministic_aggregation_mapping(self, six_user_env):
        """A dict mapping builds the same matrix as an aligned sequence."""
        by_seq = deterministic_aggregation(six_user_env.strategies, ["A", "B"], list("AABBBB"))
        mapping = dict(zip(six_user_env.strategies, "AABBBB", strict=True))
        by_map = deterministic_aggregation(six_user_env.strategies, ["A", "B"], mapping)
        np.testing.assert_array_equal(by_seq.matrix, by_map.matrix)
        assert by_seq.is_deterministic

    def test_as_aggregation_passes_channel(self, env1):
        """A valid channel is returned unchanged."""
        agg = identity_channel(env1.strategies)
        assert as_aggregation(env1, agg) is agg

    def test_prior_preserved_random(self):
        """Aggregation never changes the prior."""
        rng = np.random.default_rng(59)
        for _ in range(200):
            env = random_hyper(rng)
            model = apply_aggregation(env, random_aggregation(rng, env))
            np.testing.assert_allclose(prior_of(model).probs, prior_of(env).probs, atol=1e-9)


class TestCheckAbstracts:
    """Tests for the abstraction check."""

    def test_model_f_abstracts_six_users(self, six_user_env, model_f):
        """Some aggregation turns the six users into the per-state model."""
        witness = check_abstracts(model_f, six_user_env)
        assert witness.holds
        assert witness.residual <= EPS_FEAS
        assert witness.matrix is not None
        assert witness.matrix.input_space == six_user_env.strategies
        assert witness.matrix.output_space == model_f.strategies
        np.testing.assert_allclose(
            joint_matrix(six_user_env).matrix @ witness.matrix.matrix,
            joint_matrix(model_f).matrix,
            atol=EPS_FEAS,
        )

    def test_point_hyper_abstracts_everything(self, six_user_env):
        """[prior] is an abstraction of every environment."""
        witness = check_abstracts(point_hyper(prior_of(six_user_env)), six_user_env)
        assert witness.holds
        assert witness.matrix is not None
        np.testing.assert_allclose(witness.matrix.matrix, np.ones((6, 1)), atol=EPS_FEAS)

    def test_env1_not_abstraction_of_env2(self, env1, env2):
        """One fair coin cannot be post-processed into two deterministic strategies."""
        witness = check_abstracts(env1, env2)
        assert not witness.holds
        assert witness.matrix is None
        assert witness.residual > EPS_FEAS

    def test_env2_abstracts_env1(self, env1, env2):
        """Forgetting which deterministic strategy was used gives the fair coin."""
        assert check_abstracts(env2, env1).holds

    def test_self_abstraction(self, six_user_env):
        """Every environment abstracts itself."""
        assert check_abstracts(six_user_env, six_user_env).holds

    def test_space_mismatch(self, env1):
        """Model and environment must share the secret space."""
        other = point_hyper(make_distribution(SecretSpace.of(["a", "b"]), [0.5, 0.5]))
        with pytest.raises(SpaceMismatch):
            check_abstracts(other, env1)

    def test_require_abstraction_raises(self, env1, env2):
        """require_abstraction refuses a non-abstraction."""
        with pytest.raises(NotAnAbstraction):
            require_abstraction(env1, env2)

    def test_completeness_random(self):
        """E.A is always recognized as an abstraction of E, with a sound witness."""
        rng = np.random.default_rng(61)
        for _ in range(100):
            env = random_hyper(rng)
            model = apply_aggregation(env, random_aggregation(rng, env))
            witness = check_abstracts(model, env)
            assert witness.holds
            assert witness.matrix is not None
            product = joint_matrix(env).matrix @ witness.matrix.matrix
            residual = np.max(np.abs(product - joint_matrix(model).matrix))
            assert residual <= EPS_FEAS

    def test_completeness_many_inners(self):
        """Larger environments with up to 12 inners and 9 abstract strategies."""
        rng = np.random.default_rng(5)
        space = SecretSpace.indexed(5)
        for _ in range(60):
            env = random_hyper(rng, space, max_inners=12)
            model = apply_aggregation(env, random_aggregation(rng, env, max_outputs=9))
            witness = check_abstracts(model, env)
            assert witness.holds, f"{len(env)} -> {len(model)}: residual {witness.residual}"
            assert witness.residual <= EPS_FEAS
            assert strategy_vulnerability_given(BAYES, env, model) <= 1.0 + EPS_FEAS


class TestModelVulnerability:
    """Tests for V(M|E)."""

    def test_identity_aggregation(self, six_user_env):
        """Holding the environment itself gives V_E(E)."""
        v = model_vulnerability(BAYES, six_user_env, identity_channel(six_user_env.strategies))
        assert v == pytest.approx(V_E_SIX_USERS, abs=1e-9)

    def test_noninterferent_aggregation(self, six_user_env):
        """Holding only the prior gives V(prior) = 13/24."""
        blind = noninterferent_channel(six_user_env.strategies)
        v = model_vulnerability(BAYES, six_user_env, blind)
        assert v == pytest.approx(13 / 24, abs=1e-9)

    def test_state_aggregation(self, six_user_env, a_state, model_f):
        """Holding the per-state model gives V_E(F)."""
        v = model_vulnerability(BAYES, six_user_env, a_state)
        assert v == pytest.approx(V_E_MODEL_F, abs=1e-9)
        assert v == pytest.approx(environmental_vulnerability(BAYES, model_f), abs=1e-9)

    def test_model_only(self, six_user_env, model_f):
        """With only M given, a witness A is found first."""
        v = model_vulnerability_of(BAYES, six_user_env, model_f)
        assert v == pytest.approx(V_E_MODEL_F, abs=1e-7)

    def test_independent_of_witness(self, space):
        """Two different aggregations giving the same model give the same V(M|E)."""
        env = hyper_from_matrix(space, [[1, 0], [1, 0], [0, 1]], [1 / 4, 1 / 4, 1 / 2])
        labels = SecretSpace.of(["p", "q"])
        first = make_channel(env.strategies, labels, [[1, 0], [0, 1], [0, 1]])
        second = make_channel(env.strategies, labels, [[0, 1], [1, 0], [0, 1]])
        np.testing.assert_allclose(
            apply_aggregation(env, first).inner_matrix,
            apply_aggregation(env, second).inner_matrix,
        )
        assert model_vulnerability(BAYES, env, first) == pytest.approx(
            model_vulnerability(BAYES, env, second)
        )

    def test_weighted_gain(self, gain_b, env3):
        """The weighted adversary holding only the prior scores V_g(prior)."""
        v = model_vulnerability(gain_b, env3, noninterferent_channel(env3.strategies))
        assert v == pytest.approx(0.95)

    def test_equals_environmental_vulnerability_random(self):
        """V(M|E) = V_E(E.A) for Bayes and random gains."""
        rng = np.random.default_rng(67)
        for _ in range(200):
            env = random_hyper(rng)
            agg = random_aggregation(rng, env)
            model = apply_aggregation(env, agg)
            for v in (BAYES, *(random_gain(rng, env.space) for _ in range(3))):
                assert model_vulnerability(v, env, agg) == pytest.approx(
                    hyper_vulnerability(v, model), abs=1e-9
                )


class TestStrategyVulnerabilityGiven:
    """Tests for V_S(M|E) and the refinement ratio."""

    def test_environment_itself(self, six_user_env):
        """Holding E gives 1."""
        assert strategy_vulnerability_given(BAYES, six_user_env, six_user_env) == pytest.approx(1.0)

    def test_prior_only(self, six_user_env):
        """Holding [prior] gives V_S(E)."""
        v = strategy_vulnerability_given(BAYES, six_user_env, point_hyper(prior_of(six_user_env)))
        assert v == pytest.approx(strategy_vulnerability(BAYES, six_user_env), abs=1e-9)

    def test_model_f(self, six_user_env, model_f):
        """Holding the per-state model gives V_E(F) / V_E(E)."""
        v = strategy_vulnerability_given(BAYES, six_user_env, model_f)
        assert v == pytest.approx(V_E_MODEL_F / V_E_SIX_USERS, abs=1e-9)

    def test_not_an_abstraction(self, env1, env2):
        """A model that is not an abstraction is refused."""
        with pytest.raises(NotAnAbstraction):
            strategy_vulnerability_given(BAYES, env2, env1)

    def test_refinement_ratio_same_model(self, six_user_env, model_f):
        """No refinement, no gain."""
        assert refinement_ratio(BAYES, six_user_env, model_f, model_f) == pytest.approx(1.0)

    def test_refinement_ratio_recovers_strategy_vulnerability(self, six_user_env):
        """From E down to [prior] the ratio is V_S(E)."""
        prior = point_hyper(prior_of(six_user_env))
        ratio = refinement_ratio(BAYES, six_user_env, six_user_env, prior)
        assert ratio == pytest.approx(strategy_vulnerability(BAYES, six_user_env), abs=1e-9)

    def test_refinement_ratio_chain(self, six_user_env, model_f):
        """[prior] <= F <= E: the ratio is V(prior) / V_E(F)."""
        prior = point_hyper(prior_of(six_user_env))
        ratio = refinement_ratio(BAYES, six_user_env, model_f, prior)
        assert ratio == pytest.approx((13 / 24) / V_E_MODEL_F, abs=1e-9)

    def test_refinement_ratio_wrong_order(self, six_user_env, model_f):
        """The coarser model must be an abstraction of the finer one."""
        prior = point_hyper(prior_of(six_user_env))
        with pytest.raises(NotAnAbstraction):
            refinement_ratio(BAYES, six_user_env, prior, model_f)

    def test_decompose_given(self, six_user_env, model_f):
        """V(M|E) = V_S(M|E) x V_E(E)."""
        d = decompose_given(BAYES, six_user_env, model_f)
        assert d.perceived == pytest.approx(V_E_MODEL_F, abs=1e-9)
        assert d.by_strategy == pytest.approx(V_E_SIX_USERS, abs=1e-9)
        assert d.by_aggregation == pytest.approx(V_E_MODEL_F / V_E_SIX_USERS, abs=1e-9)

    def test_bounds_and_monotonicity_random(self):
        """V_S(E) <= V_S(M'|E) <= V_S(M|E) <= 1 along a chain M' <= M <= E."""
        rng = np.random.default_rng(71)
        for _ in range(100):
            env = random_hyper(rng)
            model = apply_aggregation(env, random_aggregation(rng, env))
            coarser = apply_aggregation(model, random_aggregation(rng, model))
            for v in (BAYES, random_gain(rng, env.space)):
                fine = strategy_vulnerability_given(v, env, model)
                coarse = strategy_vulnerability_given(v, env, coarser)
                assert strategy_vulnerability(v, env) <= coarse + 1e-9
                assert coarse <= fine + 1e-9
                assert fine <= 1 + 1e-9
                assert hyper_vulnerability(v, coarser) <= hyper_vulnerability(v, model) + 1e-9
