"""Password-corpus case study: ingestion, environments, abstractions and reports."""

from hyperqif.corpus.environment import (
    OMNISCIENT,
    PRIOR,
    UNKNOWN_BLOCK,
    EnvironmentBundle,
    Partition,
    abstract_by,
    block_bayes_vulnerability,
    build_omniscient,
    partition_by,
)
from hyperqif.corpus.records import (
    CorpusRecord,
    CorpusSchema,
    assign_random_attribute,
    derive_year_attribute,
    extract_year,
    ingest,
)
from hyperqif.corpus.report import (
    DecompositionReport,
    ReportRow,
    decomposition_report,
    format_report_table,
    rank_plot_rows,
    write_rank_plot,
)

__all__ = [
    "CorpusRecord",
    "CorpusSchema",
    "ingest",
    "extract_year",
    "derive_year_attribute",
    "assign_random_attribute",
    "EnvironmentBundle",
    "Partition",
    "OMNISCIENT",
    "PRIOR",
    "UNKNOWN_BLOCK",
    "build_omniscient",
    "partition_by",
    "abstract_by",
    "block_bayes_vulnerability",
    "DecompositionReport",
    "ReportRow",
    "decomposition_report",
    "format_report_table",
    "rank_plot_rows",
    "write_rank_plot",
]
