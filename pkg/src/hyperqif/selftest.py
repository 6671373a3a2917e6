"""Seeded property corpus over random environments, models and gain functions."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np
import structlog

from hyperqif.abstraction.aggregation import apply_aggregation
from hyperqif.abstraction.refinement import check_abstracts
from hyperqif.abstraction.relative import (
    model_vulnerability,
    refinement_ratio,
    strategy_vulnerability_given,
)
from hyperqif.config import EPS_FEAS, EPS_NORM
from hyperqif.core.distribution import SecretSpace
from hyperqif.envanalysis import (
    bayes_ratio_lower_bound,
    decompose_security,
    environmental_vulnerability,
    format_number,
    strategy_vulnerability,
)
from hyperqif.hyper.algebra import collapse, decompose, prior_of, vulnerability_n
from hyperqif.measures.gain import VulnerabilityMeasure
from hyperqif.measures.vulnerability import hyper_vulnerability
from hyperqif.sampling import (
    random_aggregation,
    random_gain,
    random_higher_hyper,
    random_hyper,
    random_space,
)

log = structlog.get_logger()

# One instance: returns how far the property is from holding (<= 0 means it holds)
Check = Callable[[np.random.Generator], float]


@dataclass(frozen=True)
class CheckResult:
    name: str
    instances: int
    failures: int
    worst: float
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.failures == 0


def _measures(rng: np.random.Generator, space: SecretSpace) -> list[VulnerabilityMeasure]:
    gains = [VulnerabilityMeasure.from_gain(random_gain(rng, space)) for _ in range(3)]
    return [VulnerabilityMeasure.bayes(), *gains]


def _jensen(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    prior = prior_of(env)
    return max(
        v.evaluate(prior) - environmental_vulnerability(v, env)
        for v in _measures(rng, env.space)
    )


def _decomposition(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    worst = 0.0
    for v in _measures(rng, env.space):
        d = decompose_security(v, env)
        worst = max(worst, abs(d.perceived - d.by_aggregation * d.by_strategy))
    return worst


def _miracle(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    bound = bayes_ratio_lower_bound(env)
    return max(bound - strategy_vulnerability(v, env) for v in _measures(rng, env.space))


def _prior_preservation(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    model = apply_aggregation(env, random_aggregation(rng, env))
    return float(np.max(np.abs(prior_of(model).probs - prior_of(env).probs)))


def _model_equivalence(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    agg = random_aggregation(rng, env)
    model = apply_aggregation(env, agg)
    return max(
        abs(model_vulnerability(v, env, agg) - hyper_vulnerability(v, model))
        for v in _measures(rng, env.space)
    )


def _monotonicity(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    model = apply_aggregation(env, random_aggregation(rng, env))
    coarser = apply_aggregation(model, random_aggregation(rng, model))
    worst = -math.inf
    for v in _measures(rng, env.space):
        worst = max(worst, hyper_vulnerability(v, coarser) - hyper_vulnerability(v, model))
        worst = max(
            worst,
            strategy_vulnerability_given(v, env, coarser)
            - strategy_vulnerability_given(v, env, model),
        )
    return worst


def _bounds(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    model = apply_aggregation(env, random_aggregation(rng, env))
    worst = -math.inf
    for v in _measures(rng, env.space):
        given = strategy_vulnerability_given(v, env, model)
        worst = max(worst, strategy_vulnerability(v, env) - given, given - 1.0)
    return worst


def _delta_cascade(rng: np.random.Generator) -> float:
    hyper = random_hyper(rng)
    agg = random_aggregation(rng, hyper)
    prior, delta = decompose(hyper)
    _, delta_abstract = decompose(apply_aggregation(hyper, agg))
    cascaded = delta.matrix @ agg.matrix
    cols = [agg.output_space.index(label) for label in delta_abstract.output_space]
    rows = prior.probs > 0
    return float(np.max(np.abs(delta_abstract.matrix[rows] - cascaded[rows][:, cols])))


def _ratio_identity(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    model = apply_aggregation(env, random_aggregation(rng, env))
    coarser = apply_aggregation(model, random_aggregation(rng, model))
    worst = 0.0
    for v in _measures(rng, env.space):
        expected = hyper_vulnerability(v, coarser) / hyper_vulnerability(v, model)
        worst = max(worst, abs(refinement_ratio(v, env, model, coarser) - expected))
    return worst


def _collapse(rng: np.random.Generator) -> float:
    space = random_space(rng, max_secrets=4)
    h = random_higher_hyper(rng, space, depth=int(rng.integers(2, 5)))
    flat = collapse(h)
    return max(
        abs(vulnerability_n(v, h) - hyper_vulnerability(v, flat)) for v in _measures(rng, space)
    )


def _completeness(rng: np.random.Generator) -> float:
    env = random_hyper(rng)
    model = apply_aggregation(env, random_aggregation(rng, env))
    witness = check_abstracts(model, env)
    return witness.residual if witness.holds else math.inf


CHECKS: dict[str, tuple[Check, float]] = {
    "jensen": (_jensen, EPS_NORM),
    "decomposition": (_decomposition, EPS_NORM),
    "miracle_bound": (_miracle, EPS_NORM),
    "prior_preservation": (_prior_preservation, EPS_NORM),
    "model_equivalence": (_model_equivalence, EPS_NORM),
    "monotonicity": (_monotonicity, EPS_FEAS),
    "bounds": (_bounds, EPS_FEAS),
    "delta_cascade": (_delta_cascade, EPS_NORM),
    "ratio_identity": (_ratio_identity, EPS_FEAS),
    "collapse": (_collapse, EPS_NORM),
    "abstraction_completeness": (_completeness, EPS_FEAS),
}


def run_check(name: str, seed: int, instances: int) -> CheckResult:
    """Run one property over instances random cases drawn from (seed, name)."""
    check, tolerance = CHECKS[name]
    rng = np.random.default_rng([seed, list(CHECKS).index(name)])
    failures = 0
    worst = -math.inf
    for i in range(instances):
        try:
            gap = check(rng)
        except Exception as e:  # noqa: BLE001
            log.warning("Property check raised", check=name, instance=i, error=str(e))
            gap = math.inf
        worst = max(worst, gap)
        if gap > tolerance:
            failures += 1
            log.debug("Property violated", check=name, instance=i, gap=gap)
    return CheckResult(name, instances, failures, worst, tolerance)


def run_selftest(seed: int, instances: int) -> list[CheckResult]:
    results = [run_check(name, seed, instances) for name in CHECKS]
    log.info(
        "Selftest finished",
        seed=seed,
        instances=instances,
        failed=[r.name for r in results if not r.ok],
    )
    return results


def format_selftest_table(results: list[CheckResult]) -> str:
    """Format selftest results as an ASCII table."""
    lines = []
    lines.append(f"{'Property':<26} {'Instances':>9} {'Failures':>9} {'Worst gap':>18} {'Tol':>18}")
    lines.append("-" * 84)
    for r in results:
        worst = format_number(r.worst)
        tol = format_number(r.tolerance)
        lines.append(f"{r.name:<26} {r.instances:>9} {r.failures:>9} {worst:>18} {tol:>18}")
    return "\n".join(lines)
