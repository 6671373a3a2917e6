"""Gain functions and vulnerability measures."""

from hyperqif.measures.gain import (
    BUILTIN_MEASURES,
    GainFunction,
    MeasureLike,
    VulnerabilityMeasure,
    as_measure,
    builtin_gain,
    builtin_measure,
    identity_gain,
    make_gain,
    weighted_identity_gain,
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

__all__ = [
    "BUILTIN_MEASURES",
    "GainFunction",
    "MeasureLike",
    "VulnerabilityMeasure",
    "as_measure",
    "builtin_gain",
    "builtin_measure",
    "identity_gain",
    "make_gain",
    "weighted_identity_gain",
    "g_vulnerability",
    "bayes_vulnerability",
    "optimal_guess",
    "hyper_vulnerability",
    "posterior_g_vulnerability",
    "joint_bayes",
    "conditional_bayes",
]
