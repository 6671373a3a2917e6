"""Environmental vulnerability, strategy vulnerability and the perceived-security decomposition.

    perceived security (V(prior))
        = security by aggregation (V_S)  x  security by strategy (V_E)
"""

from __future__ import annotations

import math

import structlog
from pydantic import BaseModel, ConfigDict, computed_field, model_validator

from hyperqif.config import BITS_FLOOR, EPS_NORM, SIGNIFICANT_DIGITS
from hyperqif.errors import ZeroEnvironmentalVulnerability
from hyperqif.hyper.algebra import prior_of
from hyperqif.hyper.model import Hyper
from hyperqif.measures.gain import MeasureLike, VulnerabilityMeasure, as_measure
from hyperqif.measures.vulnerability import hyper_vulnerability

log = structlog.get_logger()


def to_bits(value: float, floor: float = BITS_FLOOR) -> float:
    """-log2 of value, clamped below at floor."""
    # 0.0 - x so that a value of exactly 1 gives 0.0 and not -0.0
    return 0.0 - math.log2(max(value, floor))


def format_number(value: float) -> str:
    """value at the precision documents are written with."""
    return f"{value:.{SIGNIFICANT_DIGITS}g}"


class SecurityDecomposition(BaseModel):
    """V(prior) split into security by aggregation and security by strategy."""

    model_config = ConfigDict(frozen=True)

    measure: str = "bayes"
    perceived: float
    by_aggregation: float
    by_strategy: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def bits(self) -> dict[str, float]:
        """The three factors as -log2 (min-entropy style)."""
        return {
            "perceived": to_bits(self.perceived),
            "by_aggregation": to_bits(self.by_aggregation),
            "by_strategy": to_bits(self.by_strategy),
        }

    @model_validator(mode="after")
    def check_product(self) -> SecurityDecomposition:
        """Ensure perceived = by_aggregation x by_strategy and by_aggregation <= 1."""
        product = self.by_aggregation * self.by_strategy
        if not math.isclose(self.perceived, product, rel_tol=EPS_NORM, abs_tol=EPS_NORM):
            raise ValueError(
                f"perceived {self.perceived} != {self.by_aggregation} x {self.by_strategy}"
            )
        if not -EPS_NORM <= self.by_aggregation <= 1 + EPS_NORM:
            raise ValueError(f"by_aggregation {self.by_aggregation} is outside [0, 1]")
        return self


def environmental_vulnerability(measure: MeasureLike, env: Hyper) -> float:
    """V_E(env): expectation of the measure over the environment's strategies.

    Raises:
        SpaceMismatch: If a g-measure is over a different space than env
    """
    return hyper_vulnerability(measure, env)


def vulnerability_ratio(numerator: float, env_vulnerability: float, what: str) -> float:
    """numerator / env_vulnerability, refusing a zero denominator."""
    if env_vulnerability <= 0:
        raise ZeroEnvironmentalVulnerability(
            f"{what}: environmental vulnerability is {env_vulnerability}"
        )
    return numerator / env_vulnerability


def strategy_vulnerability(measure: MeasureLike, env: Hyper) -> float:
    """V_S(env) = V(prior of env) / V_E(env), in (0, 1].

    Raises:
        ZeroEnvironmentalVulnerability: If V_E(env) is 0
    """
    v = as_measure(measure)
    perceived = v.evaluate(prior_of(env))
    by_strategy = environmental_vulnerability(v, env)
    return vulnerability_ratio(perceived, by_strategy, "strategy vulnerability")


def decompose_security(measure: MeasureLike, env: Hyper) -> SecurityDecomposition:
    """Perceived security with its aggregation and strategy factors.

    Raises:
        ZeroEnvironmentalVulnerability: If V_E(env) is 0
    """
    v = as_measure(measure)
    perceived = v.evaluate(prior_of(env))
    by_strategy = environmental_vulnerability(v, env)
    by_aggregation = vulnerability_ratio(perceived, by_strategy, "decomposition")
    log.debug(
        "Decomposed security",
        measure=v.name,
        perceived=perceived,
        by_aggregation=by_aggregation,
        by_strategy=by_strategy,
    )
    return SecurityDecomposition(
        measure=v.name,
        perceived=perceived,
        by_aggregation=by_aggregation,
        by_strategy=by_strategy,
    )


def bayes_ratio_lower_bound(env: Hyper) -> float:
    """V^Bayes(prior) / V_E^Bayes(env), a lower bound on V_S(env) for every measure.

    Raises:
        ZeroEnvironmentalVulnerability: If the Bayes environmental vulnerability is 0
    """
    return strategy_vulnerability(VulnerabilityMeasure.bayes(), env)
