"""Document importer - JSON files to domain values."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any, TypeVar

import structlog
from pydantic import BaseModel, ValidationError

from hyperqif.abstraction.refinement import RefinementWitness
from hyperqif.config import EPS_NORM
from hyperqif.core.channel import Channel, JointDistribution, make_channel, make_joint
from hyperqif.core.distribution import Distribution, SecretSpace, make_distribution
from hyperqif.corpus.report import DecompositionReport
from hyperqif.envanalysis import SecurityDecomposition
from hyperqif.errors import DocumentError
from hyperqif.hyper.model import HigherHyper, Hyper, Leaf, hyper_from_matrix, make_node
from hyperqif.measures.gain import GainFunction, make_gain
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

log = structlog.get_logger()

DocT = TypeVar("DocT", bound=BaseModel)


def read_json(path: Path | str) -> Any:
    """Parse a JSON file.

    Raises:
        OSError: If the file cannot be read
        DocumentError: If the content is not JSON
    """
    path = Path(path)
    try:
        with path.open(encoding="utf-8") as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise DocumentError(f"{path}: not valid JSON: {e}") from e


def parse_document(data: Any, model: type[DocT], source: str = "<data>") -> DocT:
    """Validate raw JSON data against a document model.

    Raises:
        DocumentError: If the data does not fit the model
    """
    try:
        return model.model_validate(data)
    except ValidationError as e:
        raise DocumentError(f"{source}: invalid {model.__name__}: {e}") from e


def _load(path: Path | str, model: type[DocT]) -> DocT:
    doc = parse_document(read_json(path), model, str(path))
    log.debug("Loaded document", path=str(path), kind=model.__name__)
    return doc


def distribution_from_doc(doc: DistributionDoc, tol: float = EPS_NORM) -> Distribution:
    return make_distribution(SecretSpace.of(doc.labels), doc.probs, tol)


def channel_from_doc(doc: ChannelDoc, tol: float = EPS_NORM) -> Channel:
    if doc.kind == "joint":
        raise DocumentError("expected a channel or aggregation document, got a joint")
    return make_channel(SecretSpace.of(doc.inputs), SecretSpace.of(doc.outputs), doc.matrix, tol)


def joint_from_doc(doc: ChannelDoc, tol: float = EPS_NORM) -> JointDistribution:
    if doc.kind != "joint":
        raise DocumentError(f"expected a joint document, got kind {doc.kind!r}")
    return make_joint(SecretSpace.of(doc.inputs), SecretSpace.of(doc.outputs), doc.matrix, tol)


def gain_from_doc(doc: GainFunctionDoc) -> GainFunction:
    return make_gain(SecretSpace.of(doc.guesses), SecretSpace.of(doc.secrets), doc.gain)


def hyper_from_doc(doc: HyperDoc, tol: float = EPS_NORM) -> Hyper:
    return hyper_from_matrix(
        SecretSpace.of(doc.secrets),
        doc.inners,
        doc.outer,
        strategies=doc.strategies,
        tol=tol,
    )


def _higher_from_doc(doc: HigherHyperDoc, space: SecretSpace, tol: float) -> HigherHyper:
    if doc.leaf is not None:
        return Leaf(make_distribution(space, doc.leaf, tol))
    assert doc.outer is not None and doc.children is not None
    children = [_higher_from_doc(child, space, tol) for child in doc.children]
    return make_node(doc.outer, children, tol)


def _first_leaf(doc: HigherHyperDoc) -> list[float]:
    while doc.leaf is None:
        if not doc.children:
            raise DocumentError("higher hyper node has no children")
        doc = doc.children[0]
    return doc.leaf


def higher_hyper_from_doc(doc: HigherHyperDoc, tol: float = EPS_NORM) -> HigherHyper:
    """Build a higher hyper; secrets default to x1..xn when the document omits them."""
    labels = doc.secrets
    space = (
        SecretSpace.of(labels)
        if labels is not None
        else SecretSpace.indexed(len(_first_leaf(doc)))
    )
    return _higher_from_doc(doc, space, tol)


def decomposition_from_doc(doc: DecompositionDoc) -> SecurityDecomposition:
    return SecurityDecomposition(
        measure=doc.measure,
        perceived=doc.perceived,
        by_aggregation=doc.by_aggregation,
        by_strategy=doc.by_strategy,
    )


def load_distribution(path: Path | str, tol: float = EPS_NORM) -> Distribution:
    return distribution_from_doc(_load(path, DistributionDoc), tol)


def load_channel(path: Path | str, tol: float = EPS_NORM) -> Channel:
    """Load a channel or aggregation matrix document."""
    return channel_from_doc(_load(path, ChannelDoc), tol)


def load_joint(path: Path | str, tol: float = EPS_NORM) -> JointDistribution:
    return joint_from_doc(_load(path, ChannelDoc), tol)


def load_gain(path: Path | str) -> GainFunction:
    return gain_from_doc(_load(path, GainFunctionDoc))


def load_hyper(path: Path | str, tol: float = EPS_NORM) -> Hyper:
    return hyper_from_doc(_load(path, HyperDoc), tol)


def load_higher_hyper(path: Path | str, tol: float = EPS_NORM) -> HigherHyper:
    return higher_hyper_from_doc(_load(path, HigherHyperDoc), tol)


def load_decomposition(path: Path | str) -> SecurityDecomposition:
    return decomposition_from_doc(_load(path, DecompositionDoc))


def load_report(path: Path | str) -> DecompositionReport:
    doc = _load(path, DecompositionReportDoc)
    return DecompositionReport(
        measure=doc.measure,
        records=doc.records,
        distinct_secrets=doc.distinct_secrets,
        rows=doc.rows,
    )


def load_value(path: Path | str) -> float:
    return _load(path, ValueDoc).value


def load_refinement(path: Path | str, tol: float = EPS_NORM) -> RefinementWitness:
    doc = _load(path, RefinementDoc)
    matrix = channel_from_doc(doc.witness, tol) if doc.witness is not None else None
    return RefinementWitness(holds=doc.holds, matrix=matrix, residual=doc.residual)
