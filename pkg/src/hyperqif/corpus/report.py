"""Decomposition reports and rank-plot data for a corpus environment."""

from __future__ import annotations

import csv
from collections.abc import Sequence
from pathlib import Path

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict

from hyperqif.corpus.environment import (
    OMNISCIENT,
    PRIOR,
    EnvironmentBundle,
    block_bayes_vulnerability,
    partition_by,
)
from hyperqif.envanalysis import SecurityDecomposition, format_number, vulnerability_ratio
from hyperqif.measures.gain import MeasureLike, VulnerabilityMeasure, as_measure
from hyperqif.measures.vulnerability import hyper_vulnerability

log = structlog.get_logger()

FACTORS = ("perceived", "by_aggregation", "by_strategy")


class ReportRow(BaseModel):
    """One abstraction's share of the perceived security."""

    model_config = ConfigDict(frozen=True)

    abstraction: str
    strategies: int
    decomposition: SecurityDecomposition


class DecompositionReport(BaseModel):
    """Rows ordered omniscient, attributes, prior. The perceived column is constant."""

    model_config = ConfigDict(frozen=True)

    measure: str
    records: int
    distinct_secrets: int
    rows: list[ReportRow]


def _row(name: str, strategies: int, measure: str, perceived: float, env_v: float) -> ReportRow:
    by_aggregation = vulnerability_ratio(perceived, env_v, f"report row {name}")
    return ReportRow(
        abstraction=name,
        strategies=strategies,
        decomposition=SecurityDecomposition(
            measure=measure,
            perceived=perceived,
            by_aggregation=by_aggregation,
            by_strategy=env_v,
        ),
    )


def _sparse_bayes_rows(bundle: EnvironmentBundle, attributes: Sequence[str]) -> list[ReportRow]:
    perceived = float(bundle.counts.max() / bundle.size)
    # Every omniscient inner is a point distribution, so its Bayes V_E is exactly 1
    rows = [_row(OMNISCIENT, bundle.size, "bayes", perceived, 1.0)]
    for name in attributes:
        partition = partition_by(bundle, name)
        env_v = block_bayes_vulnerability(bundle, partition)
        rows.append(_row(name, len(partition.blocks), "bayes", perceived, env_v))
    rows.append(_row(PRIOR, 1, "bayes", perceived, perceived))
    return rows


def _dense_rows(
    bundle: EnvironmentBundle, measure: VulnerabilityMeasure, attributes: Sequence[str]
) -> list[ReportRow]:
    perceived = measure.evaluate(bundle.prior)
    abstractions = bundle.abstractions
    rows = []
    for name in (OMNISCIENT, *attributes, PRIOR):
        hyper, _ = abstractions[name]
        env_v = hyper_vulnerability(measure, hyper)
        rows.append(_row(name, len(hyper), measure.name, perceived, env_v))
    return rows


def decomposition_report(
    bundle: EnvironmentBundle,
    measure: MeasureLike | None = None,
    attributes: Sequence[str] | None = None,
    dense: bool = False,
) -> DecompositionReport:
    """Perceived security split per abstraction as V(prior) = V_S(M) x V_E(M).

    Args:
        bundle: Corpus environment
        measure: Vulnerability measure (default Bayes)
        attributes: Attribute abstractions to include (default all, in corpus order)
        dense: Force the dense hyper computation even for Bayes

    Raises:
        UnknownAttribute: If an attribute is not in the corpus
        ZeroEnvironmentalVulnerability: If some abstraction has V_E = 0
    """
    v = as_measure(measure) if measure is not None else VulnerabilityMeasure.bayes()
    names = tuple(attributes) if attributes is not None else bundle.attribute_names
    for name in names:
        partition_by(bundle, name)

    if v.kind == "bayes" and not dense:
        rows = _sparse_bayes_rows(bundle, names)
    else:
        rows = _dense_rows(bundle, v, names)
    log.info("Built decomposition report", measure=v.name, rows=len(rows), dense=dense)
    return DecompositionReport(
        measure=v.name,
        records=bundle.size,
        distinct_secrets=len(bundle.space),
        rows=rows,
    )


def format_report_table(report: DecompositionReport) -> str:
    """Format a report as an aligned text table in linear and 2^-bits form."""
    lines = []
    lines.append(
        f"{report.measure} vulnerability decomposition - "
        f"{report.records} records, {report.distinct_secrets} distinct secrets"
    )
    lines.append("")
    lines.append(
        f"{'Abstraction':<12} {'Strategies':>10} {'V(prior)':>18} {'V_S':>18} {'V_E':>18}"
        f"   {'V(prior) = V_S x V_E (bits)'}"
    )
    lines.append("-" * 110)
    for row in report.rows:
        d = row.decomposition
        values = [format_number(getattr(d, name)) for name in FACTORS]
        bits = [format_number(d.bits[name]) for name in FACTORS]
        lines.append(
            f"{row.abstraction:<12} {row.strategies:>10} "
            + " ".join(f"{v:>18}" for v in values)
            + f"   2^-{bits[0]} = 2^-{bits[1]} x 2^-{bits[2]}"
        )
    return "\n".join(lines)


def rank_plot_rows(bundle: EnvironmentBundle, attribute: str) -> list[tuple[str, int, float]]:
    """(block, rank, probability) for each password within each attribute block.

    Ranks start at 1 with the most frequent password; probabilities are within the block.

    Raises:
        UnknownAttribute: If the attribute is not in the corpus
    """
    partition = partition_by(bundle, attribute)
    n_secrets = len(bundle.space)
    sizes = partition.block_sizes()
    out: list[tuple[str, int, float]] = []
    for b, label in enumerate(partition.blocks):
        members = bundle.secret_index[partition.assignment == b]
        counts = np.bincount(members, minlength=n_secrets)
        ranked = np.sort(counts[counts > 0])[::-1]
        out.extend(
            (label, rank, float(c / sizes[b])) for rank, c in enumerate(ranked, start=1)
        )
    return out


def write_rank_plot(bundle: EnvironmentBundle, attribute: str, path: Path | str) -> int:
    """Write rank_plot_rows as CSV with a header; returns the number of data rows.

    Raises:
        OSError: If the file cannot be written
        UnknownAttribute: If the attribute is not in the corpus
    """
    rows = rank_plot_rows(bundle, attribute)
    with Path(path).open("w", newline="", encoding="utf-8", errors="surrogateescape") as f:
        writer = csv.writer(f)
        writer.writerow(["block", "rank", "probability"])
        for label, rank, p in rows:
            writer.writerow([label, rank, format_number(p)])
    log.info("Wrote rank plot data", path=str(path), attribute=attribute, rows=len(rows))
    return len(rows)
