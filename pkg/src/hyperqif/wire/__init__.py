"""JSON documents: models, import and deterministic export."""

from hyperqif.wire.exporter import (
    dump_channel,
    dump_decomposition,
    dump_distribution,
    dump_gain,
    dump_higher_hyper,
    dump_hyper,
    dump_joint,
    dump_refinement,
    dump_report,
    dump_value,
    to_json,
    write_json,
)
from hyperqif.wire.importer import (
    load_channel,
    load_decomposition,
    load_distribution,
    load_gain,
    load_higher_hyper,
    load_hyper,
    load_joint,
    load_refinement,
    load_report,
    load_value,
    parse_document,
    read_json,
)

__all__ = [
    "dump_channel",
    "dump_decomposition",
    "dump_distribution",
    "dump_gain",
    "dump_higher_hyper",
    "dump_hyper",
    "dump_joint",
    "dump_refinement",
    "dump_report",
    "dump_value",
    "to_json",
    "write_json",
    "load_channel",
    "load_decomposition",
    "load_distribution",
    "load_gain",
    "load_higher_hyper",
    "load_hyper",
    "load_joint",
    "load_refinement",
    "load_report",
    "load_value",
    "parse_document",
    "read_json",
]
