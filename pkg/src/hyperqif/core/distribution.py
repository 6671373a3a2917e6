"""Labeled secret spaces and probability distributions over them."""

from __future__ import annotations

from collections.abc import Iterable, Iterator, Sequence
from dataclasses import dataclass, field

import numpy as np
import structlog

from hyperqif.config import EPS_NORM
from hyperqif.errors import (
    InvalidLabels,
    LengthMismatch,
    NegativeProbability,
    NotNormalized,
    SpaceMismatch,
    UnknownLabel,
)

log = structlog.get_logger()


def frozen_array(values: np.ndarray | Sequence[float] | Sequence[Sequence[float]]) -> np.ndarray:
    """Return a read-only float64 copy of values."""
    arr = np.array(values, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class SecretSpace:
    """An ordered set of distinct labels.

    The order is the indexing contract for every vector and matrix built on the space.
    """

    labels: tuple[str, ...]
    _index: dict[str, int] = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        labels = tuple(str(label) for label in self.labels)
        if not labels:
            raise InvalidLabels("a secret space needs at least one label")
        if len(set(labels)) != len(labels):
            dupes = sorted({label for label in labels if labels.count(label) > 1})
            raise InvalidLabels(f"duplicate labels: {dupes}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "_index", {label: i for i, label in enumerate(labels)})

    @classmethod
    def of(cls, labels: Iterable[str]) -> SecretSpace:
        """Build a space from any iterable of labels."""
        return cls(tuple(labels))

    @classmethod
    def indexed(cls, n: int, prefix: str = "x") -> SecretSpace:
        """Build the space prefix1..prefixN."""
        return cls(tuple(f"{prefix}{i + 1}" for i in range(n)))

    def index(self, label: str) -> int:
        """Position of label in the space."""
        try:
            return self._index[label]
        except KeyError:
            raise UnknownLabel(f"label {label!r} is not in the space") from None

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __len__(self) -> int:
        return len(self.labels)

    def __iter__(self) -> Iterator[str]:
        return iter(self.labels)


@dataclass(frozen=True, eq=False)
class Distribution:
    """A probability vector indexed by a SecretSpace.

    Build through make_distribution, which validates and freezes the vector.
    """

    space: SecretSpace
    probs: np.ndarray

    @property
    def support(self) -> tuple[int, ...]:
        """Indices with positive probability."""
        return tuple(int(i) for i in np.flatnonzero(self.probs > 0))

    def __getitem__(self, label: str) -> float:
        return float(self.probs[self.space.index(label)])

    def __len__(self) -> int:
        return len(self.probs)

    def as_dict(self) -> dict[str, float]:
        return {label: float(p) for label, p in zip(self.space.labels, self.probs, strict=True)}

    def is_close(self, other: Distribution, tol: float = EPS_NORM) -> bool:
        """True if both share a space and differ by at most tol entrywise."""
        return self.space == other.space and bool(
            np.max(np.abs(self.probs - other.probs)) <= tol
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{label}={p:.6g}" for label, p in self.as_dict().items())
        return f"Distribution({body})"


def validate_probability_vector(
    values: np.ndarray | Sequence[float], tol: float = EPS_NORM
) -> np.ndarray:
    """Check non-negativity and normalization of a vector; return a normalized copy.

    Entries in [-tol, 0) are float noise and are clamped to 0. A sum off by at most tol is
    renormalized; anything further off is rejected.

    Raises:
        NegativeProbability: If any entry is below -tol
        NotNormalized: If the sum deviates from 1 by more than tol
    """
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise LengthMismatch(f"expected a vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NotNormalized("probabilities must be finite")
    if np.any(arr < -tol):
        raise NegativeProbability(f"negative probability {float(arr.min())!r}")
    arr = np.where(arr < 0, 0.0, arr)
    total = float(arr.sum())
    if abs(total - 1.0) > tol:
        raise NotNormalized(f"probabilities sum to {total!r}, not 1 (tolerance {tol})")
    if total != 1.0:
        log.debug("Renormalized probability vector", deviation=total - 1.0)
        arr = arr / total
    return arr


def make_distribution(
    space: SecretSpace, probs: np.ndarray | Sequence[float], tol: float = EPS_NORM
) -> Distribution:
    """Validate probs against space and build a Distribution.

    Raises:
        LengthMismatch: If len(probs) differs from len(space)
        NegativeProbability: If an entry is negative
        NotNormalized: If the entries do not sum to 1 within tol
    """
    arr = np.asarray(probs, dtype=np.float64)
    if arr.shape != (len(space),):
        raise LengthMismatch(f"{arr.size} probabilities for a space of {len(space)} labels")
    return Distribution(space=space, probs=frozen_array(validate_probability_vector(arr, tol)))


def point_distribution(space: SecretSpace, label: str) -> Distribution:
    """Distribution putting all mass on label."""
    probs = np.zeros(len(space))
    probs[space.index(label)] = 1.0
    return make_distribution(space, probs)


def uniform_distribution(space: SecretSpace) -> Distribution:
    """Uniform distribution over space."""
    return make_distribution(space, np.full(len(space), 1.0 / len(space)))


def require_same_space(expected: SecretSpace, actual: SecretSpace, what: str = "operand") -> None:
    """Raise SpaceMismatch unless both spaces are equal."""
    if expected != actual:
        raise SpaceMismatch(
            f"{what} is over {list(actual.labels)[:6]}..., expected {list(expected.labels)[:6]}..."
        )
