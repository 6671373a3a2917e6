"""Credential corpus ingestion and attribute derivation."""

from __future__ import annotations

import csv
import re
from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

import numpy as np
import structlog

from hyperqif.config import DEFAULT_SEED
from hyperqif.errors import SchemaMismatch, TooManyMalformed

log = structlog.get_logger()

YEAR_MIN = 1917
YEAR_MAX = 1995
YEAR_ATTRIBUTE = "year"

# Lookahead so that overlapping candidates are all visited in order
_YEAR_CANDIDATE = re.compile(r"(?=(\d{4}))")

Delimiter = Literal["auto", ",", "\t"]


@dataclass(frozen=True)
class CorpusRecord:
    """One credential and the demographic attributes known for its owner."""

    secret: str
    attributes: Mapping[str, str] = field(default_factory=dict)

    def get(self, attribute: str) -> str | None:
        return self.attributes.get(attribute)


@dataclass(frozen=True)
class CorpusSchema:
    """Column binding for a delimited corpus file.

    Attributes:
        secret_column: Header of the password column
        attribute_columns: Headers of the attribute columns to keep
        required: Attributes a row must carry to be well-formed
        delimiter: ',' or tab, or 'auto' to decide from the header line
    """

    secret_column: str = "password"
    attribute_columns: tuple[str, ...] = ()
    required: tuple[str, ...] = ()
    delimiter: Delimiter = "auto"

    def __post_init__(self) -> None:
        missing = set(self.required) - set(self.attribute_columns)
        if missing:
            raise SchemaMismatch(f"required attributes {sorted(missing)} are not attribute columns")
        if self.secret_column in self.attribute_columns:
            raise SchemaMismatch(f"{self.secret_column!r} is both secret and attribute column")

    @property
    def columns(self) -> tuple[str, ...]:
        return (self.secret_column, *self.attribute_columns)


def _detect_delimiter(header_line: str) -> str:
    return "\t" if "\t" in header_line else ","


def ingest(path: Path | str, schema: CorpusSchema, max_bad_rows: int = 0) -> list[CorpusRecord]:
    """Read a delimited corpus file with a header row.

    Rows with the wrong number of fields, an empty secret or a missing required attribute
    are counted as malformed and skipped. Duplicate secrets are all kept.
    Bytes that are not UTF-8 are kept as surrogate escapes, so raw passwords never merge.

    Args:
        path: File to read
        schema: Column binding
        max_bad_rows: Malformed rows tolerated before giving up

    Returns:
        Records in file order

    Raises:
        OSError: If the file cannot be read
        SchemaMismatch: If the header lacks a schema column or the file is empty
        TooManyMalformed: If more than max_bad_rows rows are malformed
    """
    path = Path(path)
    records: list[CorpusRecord] = []
    bad = 0
    with path.open(newline="", encoding="utf-8", errors="surrogateescape") as f:
        header_line = f.readline()
        if not header_line.strip():
            raise SchemaMismatch(f"{path} has no header row")
        delimiter = (
            _detect_delimiter(header_line) if schema.delimiter == "auto" else schema.delimiter
        )
        header = next(csv.reader([header_line], delimiter=delimiter))
        missing = [c for c in schema.columns if c not in header]
        if missing:
            raise SchemaMismatch(f"{path} header {header} lacks columns {missing}")
        positions = {name: header.index(name) for name in schema.columns}

        for line_no, row in enumerate(csv.reader(f, delimiter=delimiter), start=2):
            if not row:
                continue
            secret = row[positions[schema.secret_column]] if len(row) == len(header) else ""
            attributes = {
                name: row[positions[name]]
                for name in schema.attribute_columns
                if len(row) == len(header) and row[positions[name]] != ""
            }
            if not secret or any(name not in attributes for name in schema.required):
                bad += 1
                log.debug("Malformed corpus row", path=str(path), line=line_no)
                if bad > max_bad_rows:
                    raise TooManyMalformed(
                        f"{path}: more than {max_bad_rows} malformed rows (line {line_no})"
                    )
                continue
            records.append(CorpusRecord(secret=secret, attributes=attributes))

    if bad:
        log.warning("Skipped malformed corpus rows", path=str(path), malformed=bad)
    log.info("Ingested corpus", path=str(path), records=len(records), malformed=bad)
    return records


def extract_year(record: CorpusRecord | str) -> str | None:
    """The leftmost four-digit substring between 1917 and 1995, if any.

    >>> extract_year("patricia1983")
    '1983'
    """
    secret = record.secret if isinstance(record, CorpusRecord) else record
    for match in _YEAR_CANDIDATE.finditer(secret):
        candidate = match.group(1)
        if YEAR_MIN <= int(candidate) <= YEAR_MAX:
            return candidate
    return None


def derive_year_attribute(records: Iterable[CorpusRecord]) -> list[CorpusRecord]:
    """Keep the records whose secret embeds a year and set their 'year' attribute from it."""
    kept: list[CorpusRecord] = []
    dropped = 0
    for record in records:
        year = extract_year(record)
        if year is None:
            dropped += 1
            continue
        attributes = {**record.attributes, YEAR_ATTRIBUTE: year}
        kept.append(CorpusRecord(secret=record.secret, attributes=attributes))
    log.info("Derived year attribute", kept=len(kept), dropped=dropped)
    return kept


def assign_random_attribute(
    records: Sequence[CorpusRecord],
    name: str,
    values: Sequence[str],
    seed: int = DEFAULT_SEED,
) -> list[CorpusRecord]:
    """Give every record an attribute drawn uniformly from values, independent of the secret."""
    rng = np.random.default_rng(seed)
    draws = rng.integers(0, len(values), size=len(records))
    return [
        CorpusRecord(secret=r.secret, attributes={**r.attributes, name: values[int(d)]})
        for r, d in zip(records, draws, strict=True)
    ]
