"""JSON document models for distributions, channels, gains, hypers and reports."""

from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from hyperqif.config import SCHEMA_TAG
from hyperqif.corpus.report import ReportRow


class Document(BaseModel):
    """Base for every top-level document.

    The schema key is optional on input; any value other than the current tag is refused.
    """

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_tag: str | None = Field(SCHEMA_TAG, alias="schema")

    @field_validator("schema_tag")
    @classmethod
    def known_schema(cls, v: str | None) -> str | None:
        """Reject documents written for another schema version."""
        if v is not None and v != SCHEMA_TAG:
            raise ValueError(f"unsupported schema {v!r}, expected {SCHEMA_TAG!r}")
        return v


class DistributionDoc(Document):
    labels: list[str]
    probs: list[float]

    @model_validator(mode="after")
    def same_length(self) -> DistributionDoc:
        """Ensure one probability per label."""
        if len(self.labels) != len(self.probs):
            raise ValueError(f"{len(self.probs)} probs for {len(self.labels)} labels")
        return self


class ChannelDoc(Document):
    """A channel, a joint matrix or an aggregation matrix; kind tells which."""

    kind: Literal["channel", "joint", "aggregation"] = "channel"
    inputs: list[str]
    outputs: list[str]
    matrix: list[list[float]]


class GainFunctionDoc(Document):
    guesses: list[str]
    secrets: list[str]
    gain: list[list[float]]


class HyperDoc(Document):
    """Outer weights over inner rows; strategies labels the inners when present."""

    secrets: list[str]
    outer: list[float]
    inners: list[list[float]]
    strategies: list[str] | None = None


class HigherHyperDoc(Document):
    """Either {"leaf": [...]} or {"outer": [...], "children": [...]}.

    secrets is read from the top-level document only.
    """

    secrets: list[str] | None = None
    leaf: list[float] | None = None
    outer: list[float] | None = None
    children: list[HigherHyperDoc] | None = None

    @model_validator(mode="after")
    def leaf_or_node(self) -> HigherHyperDoc:
        """Ensure exactly one of the two shapes."""
        is_leaf = self.leaf is not None
        is_node = self.outer is not None or self.children is not None
        if is_leaf == is_node:
            raise ValueError("a higher hyper is either a leaf or an outer/children node")
        if is_node and (self.outer is None or self.children is None):
            raise ValueError("a node needs both outer and children")
        return self


class DecompositionDoc(Document):
    measure: str = "bayes"
    perceived: float
    by_aggregation: float
    by_strategy: float
    bits: dict[str, float] | None = None


class DecompositionReportDoc(Document):
    measure: str
    records: int
    distinct_secrets: int
    rows: list[ReportRow]


class ValueDoc(Document):
    """A single computed quantity, e.g. an environmental vulnerability."""

    quantity: str
    measure: str
    value: float


class RefinementDoc(Document):
    holds: bool
    residual: float
    witness: ChannelDoc | None = None
