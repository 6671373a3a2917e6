"""Gain functions and vulnerability measures."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from typing import Literal

import numpy as np

from hyperqif.core.distribution import (
    Distribution,
    SecretSpace,
    frozen_array,
    require_same_space,
)
from hyperqif.errors import DimensionMismatch, InvalidGainFunction, SpaceMismatch

MeasureKind = Literal["bayes", "identity", "g"]
BUILTIN_MEASURES: tuple[str, ...] = ("bayes", "identity")


@dataclass(frozen=True, eq=False)
class GainFunction:
    """A finite guess set W and a gain matrix g(w, x) indexed (guess, secret)."""

    guesses: SecretSpace
    space: SecretSpace
    gain: np.ndarray

    def expected_gains(self, rows: np.ndarray) -> np.ndarray:
        """Expected gain of every guess under every row distribution, shape (k, |W|)."""
        return np.atleast_2d(rows) @ self.gain.T

    def best_guess_indices(self, rows: np.ndarray) -> np.ndarray:
        """Index of the optimal guess for each row; ties go to the lowest index."""
        return np.argmax(self.expected_gains(rows), axis=1)


def make_gain(
    guesses: SecretSpace | Sequence[str],
    space: SecretSpace,
    gain: np.ndarray | Sequence[Sequence[float]],
) -> GainFunction:
    """Validate a gain matrix and build a GainFunction.

    Every column must have a non-negative entry so that V_g is non-negative on every prior.

    Raises:
        DimensionMismatch: If the matrix is not |W| x |X|
        InvalidGainFunction: If an entry is not finite or a column is entirely negative
    """
    guess_space = guesses if isinstance(guesses, SecretSpace) else SecretSpace.of(guesses)
    arr = np.array(gain, dtype=np.float64)
    if arr.ndim != 2 or arr.shape != (len(guess_space), len(space)):
        raise DimensionMismatch(
            f"gain matrix has shape {arr.shape}, expected ({len(guess_space)}, {len(space)})"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidGainFunction("gain entries must be finite")
    negative_cols = np.flatnonzero(arr.max(axis=0) < 0)
    if negative_cols.size:
        names = [space.labels[i] for i in negative_cols[:5]]
        raise InvalidGainFunction(f"every guess loses on secrets {names}")
    return GainFunction(guess_space, space, frozen_array(arr))


def identity_gain(space: SecretSpace) -> GainFunction:
    """Gain 1 for guessing the secret exactly, 0 otherwise (W = X)."""
    return make_gain(space, space, np.eye(len(space)))


def weighted_identity_gain(space: SecretSpace, weights: Sequence[float]) -> GainFunction:
    """Gain weights[x] for guessing x exactly, 0 otherwise."""
    w = np.asarray(weights, dtype=np.float64)
    if w.shape != (len(space),):
        raise DimensionMismatch(f"{w.size} weights for {len(space)} secrets")
    return make_gain(space, space, np.diag(w))


def builtin_gain(name: str, space: SecretSpace) -> GainFunction:
    """Gain function selected by name; 'bayes' and 'identity' both give identity_gain."""
    if name in BUILTIN_MEASURES:
        return identity_gain(space)
    raise InvalidGainFunction(f"unknown built-in gain {name!r}; choose from {BUILTIN_MEASURES}")


@dataclass(frozen=True, eq=False)
class VulnerabilityMeasure:
    """Bayes vulnerability, identity-gain g-vulnerability, or V_g for a given gain function.

    Bayes is the max entry of a distribution. "identity" evaluates through the g-vulnerability
    path with the identity gain of whatever space it is applied to, and agrees with Bayes.
    """

    kind: MeasureKind = "bayes"
    gain: GainFunction | None = None
    label: str | None = None

    @classmethod
    def bayes(cls) -> VulnerabilityMeasure:
        return cls("bayes")

    @classmethod
    def identity(cls) -> VulnerabilityMeasure:
        return cls("identity")

    @classmethod
    def from_gain(cls, gain: GainFunction, label: str | None = None) -> VulnerabilityMeasure:
        return cls("g", gain, label)

    @property
    def name(self) -> str:
        return self.label or self.kind

    def gain_for(self, space: SecretSpace) -> GainFunction:
        """The gain function this measure scores with on space."""
        if self.kind == "g":
            assert self.gain is not None
            require_same_space(self.gain.space, space, "distribution")
            return self.gain
        return identity_gain(space)

    def check_space(self, space: SecretSpace) -> None:
        """Raise SpaceMismatch if a g-measure is applied to a foreign space."""
        if self.kind == "g":
            assert self.gain is not None
            require_same_space(self.gain.space, space, "distribution")

    def evaluate_rows(self, space: SecretSpace, rows: np.ndarray) -> np.ndarray:
        """Vulnerability of each row of a (k, |X|) matrix of distributions over space."""
        arr = np.atleast_2d(rows)
        if arr.shape[1] != len(space):
            raise SpaceMismatch(f"rows have {arr.shape[1]} columns for {len(space)} secrets")
        if self.kind == "bayes":
            return arr.max(axis=1)
        return self.gain_for(space).expected_gains(arr).max(axis=1)

    def evaluate(self, dist: Distribution) -> float:
        return float(self.evaluate_rows(dist.space, dist.probs)[0])


MeasureLike = VulnerabilityMeasure | GainFunction


def as_measure(measure: MeasureLike) -> VulnerabilityMeasure:
    """Accept a gain function wherever a measure is expected."""
    if isinstance(measure, GainFunction):
        return VulnerabilityMeasure.from_gain(measure)
    return measure


def builtin_measure(name: str) -> VulnerabilityMeasure:
    """Measure selected by name: 'bayes' or 'identity'."""
    if name == "bayes":
        return VulnerabilityMeasure.bayes()
    if name == "identity":
        return VulnerabilityMeasure.identity()
    raise InvalidGainFunction(f"unknown measure {name!r}; choose from {BUILTIN_MEASURES}")
