"""Document exporter - domain values to deterministic JSON."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Literal

import numpy as np
from pydantic import BaseModel

from hyperqif.abstraction.refinement import RefinementWitness
from hyperqif.config import SCHEMA_TAG, SIGNIFICANT_DIGITS
from hyperqif.core.channel import Channel, JointDistribution
from hyperqif.core.distribution import Distribution
from hyperqif.corpus.report import DecompositionReport
from hyperqif.envanalysis import SecurityDecomposition
from hyperqif.hyper.model import HigherHyper, Hyper, Leaf
from hyperqif.measures.gain import GainFunction
from hyperqif.wire.models import (
    ChannelDoc,
    DecompositionDoc,
    DecompositionReportDoc,
    DistributionDoc,
    GainFunctionDoc,
    HigherHyperDoc,
    HyperDoc,
    RefinementDoc,
    ValueDoc,
)


def _floats(values: np.ndarray) -> Any:
    return np.asarray(values, dtype=np.float64).tolist()


def dump_distribution(dist: Distribution) -> DistributionDoc:
    return DistributionDoc(labels=list(dist.space.labels), probs=_floats(dist.probs))


def dump_channel(
    channel: Channel, kind: Literal["channel", "aggregation"] = "channel"
) -> ChannelDoc:
    return ChannelDoc(
        kind=kind,
        inputs=list(channel.input_space.labels),
        outputs=list(channel.output_space.labels),
        matrix=_floats(channel.matrix),
    )


def dump_joint(joint: JointDistribution) -> ChannelDoc:
    return ChannelDoc(
        kind="joint",
        inputs=list(joint.row_space.labels),
        outputs=list(joint.col_space.labels),
        matrix=_floats(joint.matrix),
    )


def dump_gain(gain: GainFunction) -> GainFunctionDoc:
    return GainFunctionDoc(
        guesses=list(gain.guesses.labels),
        secrets=list(gain.space.labels),
        gain=_floats(gain.gain),
    )


def dump_hyper(hyper: Hyper) -> HyperDoc:
    return HyperDoc(
        secrets=list(hyper.space.labels),
        outer=_floats(hyper.outer),
        inners=_floats(hyper.inner_matrix),
        strategies=list(hyper.strategies.labels),
    )


def _dump_higher(h: HigherHyper) -> HigherHyperDoc:
    if isinstance(h, Leaf):
        return HigherHyperDoc(schema=None, leaf=_floats(h.dist.probs))
    return HigherHyperDoc(
        schema=None,
        outer=_floats(h.outer),
        children=[_dump_higher(child) for child in h.children],
    )


def dump_higher_hyper(h: HigherHyper) -> HigherHyperDoc:
    """The top-level document carries the schema tag and the secret labels."""
    doc = _dump_higher(h)
    return doc.model_copy(update={"schema_tag": SCHEMA_TAG, "secrets": list(h.space.labels)})


def dump_decomposition(d: SecurityDecomposition) -> DecompositionDoc:
    return DecompositionDoc(
        measure=d.measure,
        perceived=d.perceived,
        by_aggregation=d.by_aggregation,
        by_strategy=d.by_strategy,
        bits=d.bits,
    )


def dump_report(report: DecompositionReport) -> DecompositionReportDoc:
    return DecompositionReportDoc(
        measure=report.measure,
        records=report.records,
        distinct_secrets=report.distinct_secrets,
        rows=report.rows,
    )


def dump_value(quantity: str, measure: str, value: float) -> ValueDoc:
    return ValueDoc(quantity=quantity, measure=measure, value=value)


def dump_refinement(witness: RefinementWitness) -> RefinementDoc:
    matrix = witness.matrix
    return RefinementDoc(
        holds=witness.holds,
        residual=witness.residual,
        witness=dump_channel(matrix, kind="aggregation") if matrix is not None else None,
    )


def _rounded(value: Any) -> Any:
    if isinstance(value, float):
        return float(f"{value:.{SIGNIFICANT_DIGITS}g}")
    if isinstance(value, dict):
        return {k: _rounded(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [_rounded(v) for v in value]
    return value


def to_json(doc: BaseModel) -> str:
    """Serialize a document with sorted keys and floats at 12 significant digits."""
    data = doc.model_dump(mode="json", by_alias=True, exclude_none=True)
    return json.dumps(_rounded(data), sort_keys=True, indent=2) + "\n"


def write_json(doc: BaseModel, path: Path | str) -> None:
    """Write a document to path.

    Raises:
        OSError: If the file cannot be written
    """
    Path(path).write_text(to_json(doc), encoding="utf-8")
