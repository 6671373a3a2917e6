"""The omniscient environment of a corpus and its attribute abstractions.

Every record is treated as a distinct user with a deterministic strategy: the point
distribution on their password. The environment is kept sparse (one password index per
record); the dense Hyper is built only on request.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from functools import cached_property

import numpy as np
import structlog

from hyperqif.abstraction.aggregation import (
    AggregationMatrix,
    apply_aggregation,
    deterministic_aggregation,
)
from hyperqif.core.channel import identity_channel, noninterferent_channel
from hyperqif.core.distribution import Distribution, SecretSpace, make_distribution
from hyperqif.corpus.records import CorpusRecord
from hyperqif.errors import EmptyCorpus, UnknownAttribute
from hyperqif.hyper.model import Hyper, hyper_from_matrix

log = structlog.get_logger()

UNKNOWN_BLOCK = "<unknown>"
OMNISCIENT = "omniscient"
PRIOR = "prior"


@dataclass(frozen=True, eq=False)
class EnvironmentBundle:
    """A corpus seen as an environment of one deterministic strategy per record.

    Attributes:
        space: Distinct passwords in first-seen order
        secret_index: Position in space of each record's password
        attributes: Per attribute name, each record's value (None when absent)
    """

    space: SecretSpace
    secret_index: np.ndarray
    attributes: dict[str, tuple[str | None, ...]]

    @property
    def size(self) -> int:
        return len(self.secret_index)

    @property
    def attribute_names(self) -> tuple[str, ...]:
        return tuple(self.attributes)

    @cached_property
    def counts(self) -> np.ndarray:
        """Occurrences of each password."""
        return np.bincount(self.secret_index, minlength=len(self.space))

    @cached_property
    def prior(self) -> Distribution:
        return make_distribution(self.space, self.counts / self.size)

    @cached_property
    def record_labels(self) -> SecretSpace:
        return SecretSpace.indexed(self.size, prefix="r")

    @cached_property
    def omniscient(self) -> Hyper:
        """Dense form: N point inners, each with outer weight 1/N."""
        inner_matrix = np.zeros((self.size, len(self.space)))
        inner_matrix[np.arange(self.size), self.secret_index] = 1.0
        return hyper_from_matrix(
            self.space,
            inner_matrix,
            np.full(self.size, 1.0 / self.size),
            strategies=self.record_labels,
        )

    @property
    def abstractions(self) -> dict[str, tuple[Hyper, AggregationMatrix]]:
        """Dense abstractions: omniscient, one per attribute, then prior."""
        out: dict[str, tuple[Hyper, AggregationMatrix]] = {
            OMNISCIENT: (self.omniscient, identity_channel(self.record_labels))
        }
        for name in self.attribute_names:
            out[name] = abstract_by(self, name)
        prior_agg = noninterferent_channel(self.record_labels, output=PRIOR)
        out[PRIOR] = (apply_aggregation(self.omniscient, prior_agg), prior_agg)
        return out


@dataclass(frozen=True)
class Partition:
    """Records grouped into blocks by the value of one attribute."""

    attribute: str
    blocks: SecretSpace
    assignment: np.ndarray

    def block_sizes(self) -> np.ndarray:
        return np.bincount(self.assignment, minlength=len(self.blocks))


def build_omniscient(records: Sequence[CorpusRecord]) -> EnvironmentBundle:
    """The omniscient environment of a corpus.

    Raises:
        EmptyCorpus: If records is empty
    """
    if not records:
        raise EmptyCorpus("cannot build an environment from an empty corpus")
    positions: dict[str, int] = {}
    index = np.empty(len(records), dtype=np.int64)
    for i, record in enumerate(records):
        index[i] = positions.setdefault(record.secret, len(positions))

    names: list[str] = []
    for record in records:
        for name in record.attributes:
            if name not in names:
                names.append(name)
    attributes = {name: tuple(r.get(name) for r in records) for name in names}

    log.info(
        "Built omniscient environment",
        records=len(records),
        distinct_secrets=len(positions),
        attributes=names,
    )
    return EnvironmentBundle(
        space=SecretSpace(tuple(positions)),
        secret_index=index,
        attributes=attributes,
    )


def missing_block_label(values: set[str]) -> str:
    """UNKNOWN_BLOCK, wrapped in further brackets until no real value equals it."""
    label = UNKNOWN_BLOCK
    while label in values:
        label = f"<{label}>"
    return label


def partition_by(bundle: EnvironmentBundle, attribute: str) -> Partition:
    """Block structure of an attribute; records lacking it share one block, listed last.

    Raises:
        UnknownAttribute: If no record carries the attribute
    """
    if attribute not in bundle.attributes:
        raise UnknownAttribute(f"attribute {attribute!r} not in {list(bundle.attribute_names)}")
    raw = bundle.attributes[attribute]
    labels = sorted({v for v in raw if v is not None})
    missing = missing_block_label(set(labels))
    values = [missing if v is None else v for v in raw]
    if None in raw:
        labels.append(missing)
    blocks = SecretSpace(tuple(labels))
    assignment = np.array([blocks.index(v) for v in values], dtype=np.int64)
    return Partition(attribute=attribute, blocks=blocks, assignment=assignment)


def abstract_by(bundle: EnvironmentBundle, attribute: str) -> tuple[Hyper, AggregationMatrix]:
    """The model of an adversary who knows each user's attribute block.

    Returns:
        (apply_aggregation(omniscient, A), A) with A the deterministic record-to-block matrix

    Raises:
        UnknownAttribute: If no record carries the attribute
    """
    partition = partition_by(bundle, attribute)
    labels = partition.blocks.labels
    aggregation = deterministic_aggregation(
        bundle.record_labels,
        partition.blocks,
        [labels[b] for b in partition.assignment],
    )
    return apply_aggregation(bundle.omniscient, aggregation), aggregation


def block_bayes_vulnerability(bundle: EnvironmentBundle, partition: Partition) -> float:
    """V_E^Bayes of a partition's model from counts: sum over blocks of the top count, over N."""
    n_secrets = len(bundle.space)
    keys = partition.assignment * n_secrets + bundle.secret_index
    cells, counts = np.unique(keys, return_counts=True)
    block_max = np.zeros(len(partition.blocks))
    np.maximum.at(block_max, cells // n_secrets, counts)
    return float(block_max.sum() / bundle.size)
