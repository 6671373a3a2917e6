"""CLI for hyperqif.

Usage:
    hyperqif vuln --dist p.json --measure bayes
    hyperqif env-vuln --env e.json --measure g --gain g.json
    hyperqif decompose --env e.json --output json
    hyperqif check-refines --concrete e.json --abstract m.json --emit-witness a.json
    hyperqif corpus analyze --input pw.csv --secret-col password --attr-cols year,gender
"""

import functools
from collections.abc import Callable
from pathlib import Path
from typing import Any, TypeVar, cast

import click
import structlog
from pydantic import BaseModel, ValidationError

from hyperqif.abstraction.aggregation import apply_aggregation
from hyperqif.abstraction.refinement import check_abstracts
from hyperqif.abstraction.relative import decompose_given, strategy_vulnerability_given
from hyperqif.config import Settings
from hyperqif.corpus.environment import EnvironmentBundle, build_omniscient
from hyperqif.corpus.records import (
    CorpusSchema,
    Delimiter,
    assign_random_attribute,
    derive_year_attribute,
    ingest,
)
from hyperqif.corpus.report import decomposition_report, format_report_table, write_rank_plot
from hyperqif.envanalysis import (
    SecurityDecomposition,
    decompose_security,
    environmental_vulnerability,
    format_number,
    strategy_vulnerability,
)
from hyperqif.errors import HyperQIFError
from hyperqif.hyper.algebra import collapse
from hyperqif.hyper.model import Hyper
from hyperqif.logging import configure_logging
from hyperqif.measures.gain import VulnerabilityMeasure, builtin_measure
from hyperqif.selftest import format_selftest_table, run_selftest
from hyperqif.wire.exporter import (
    dump_channel,
    dump_decomposition,
    dump_hyper,
    dump_refinement,
    dump_report,
    dump_value,
    to_json,
    write_json,
)
from hyperqif.wire.importer import (
    load_channel,
    load_distribution,
    load_gain,
    load_higher_hyper,
    load_hyper,
)

log = structlog.get_logger()

EXIT_NEGATIVE = 1
EXIT_ERROR = 2

DELIMITERS: dict[str, Delimiter] = {"auto": "auto", "comma": ",", "tab": "\t"}

F = TypeVar("F", bound=Callable[..., Any])

INPUT_FILE = click.Path(exists=False, dir_okay=False, path_type=Path)


def handle_errors(func: F) -> F:
    """Turn library, I/O and document errors into one stderr line and exit code 2."""

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except (HyperQIFError, OSError, ValidationError) as e:
            log.debug("Command failed", error_type=type(e).__name__, exc_info=True)
            message = " ".join(str(e).split())
            click.echo(f"error: {type(e).__name__}: {message}", err=True)
            raise SystemExit(EXIT_ERROR) from e

    return cast(F, wrapper)


def measure_options(func: F) -> F:
    func = click.option(
        "--gain",
        "gain_path",
        type=INPUT_FILE,
        help="Gain function JSON (required with --measure g)",
    )(func)
    func = click.option(
        "--measure",
        type=click.Choice(["bayes", "identity", "g"]),
        default="bayes",
        show_default=True,
        help="Vulnerability measure",
    )(func)
    return func


def output_options(func: F) -> F:
    func = click.option(
        "--output",
        type=click.Choice(["table", "json"]),
        default="table",
        show_default=True,
        help="Output format",
    )(func)
    func = click.option(
        "--tolerance",
        type=float,
        default=None,
        help="Normalization tolerance for inputs (default from config)",
    )(func)
    return func


def resolve_measure(measure: str, gain_path: Path | None) -> VulnerabilityMeasure:
    """Measure named on the command line; --gain goes with --measure g and only with it."""
    if measure == "g":
        if gain_path is None:
            raise click.UsageError("--gain is required with --measure g")
        return VulnerabilityMeasure.from_gain(load_gain(gain_path))
    if gain_path is not None:
        raise click.UsageError("--gain is only valid with --measure g")
    return builtin_measure(measure)


def get_settings(ctx: click.Context) -> Settings:
    return cast(Settings, ctx.obj["settings"])


def norm_tolerance(ctx: click.Context, override: float | None) -> float:
    return override if override is not None else get_settings(ctx).norm_tolerance


def emit(output: str, doc: BaseModel, table: str) -> None:
    if output == "json":
        click.echo(to_json(doc), nl=False)
    else:
        click.echo(table)


def emit_value(output: str, quantity: str, measure: str, value: float) -> None:
    table = f"{measure} {quantity}: {format_number(value)}"
    emit(output, dump_value(quantity, measure, value), table)


def format_decomposition(d: SecurityDecomposition) -> str:
    """Format a decomposition as aligned lines with their bits."""
    lines = [f"{d.measure} decomposition"]
    for name in ("perceived", "by_aggregation", "by_strategy"):
        value = format_number(getattr(d, name))
        lines.append(f"  {name:<16} {value:>18}   2^-{format_number(d.bits[name])}")
    return "\n".join(lines)


def format_hyper_table(hyper: Hyper) -> str:
    """Format a hyper as one row per inner: label, outer weight, inner probabilities."""
    lines = []
    lines.append(f"{'Strategy':<12} {'Outer':>18} " + " ".join(f"{s:>18}" for s in hyper.space))
    lines.append("-" * (32 + 19 * len(hyper.space)))
    for label, p, row in zip(hyper.strategies, hyper.outer, hyper.inner_matrix, strict=True):
        cells = " ".join(f"{format_number(q):>18}" for q in row)
        lines.append(f"{label:<12} {format_number(p):>18} {cells}")
    return "\n".join(lines)


@click.group()
@click.option(
    "--config",
    "config_path",
    type=click.Path(exists=False, path_type=Path),
    default=Path.home() / ".hyperqif" / "config.yaml",
    help="Config file path",
)
@click.option("--verbose", "-v", is_flag=True, help="Enable debug logging")
@click.pass_context
def main(ctx: click.Context, config_path: Path, verbose: bool) -> None:
    """Vulnerability of secrets generated under a plurality of strategies."""
    ctx.ensure_object(dict)
    settings = Settings.from_file(config_path)
    configure_logging("hyperqif", "DEBUG" if verbose else settings.log_level)
    ctx.obj["settings"] = settings
    ctx.obj["verbose"] = verbose


# --- Vulnerability Commands ---


@main.command("vuln")
@click.option("--dist", "dist_path", required=True, type=INPUT_FILE, help="Distribution JSON")
@measure_options
@output_options
@click.pass_context
@handle_errors
def vuln(
    ctx: click.Context,
    dist_path: Path,
    measure: str,
    gain_path: Path | None,
    tolerance: float | None,
    output: str,
) -> None:
    """Vulnerability of a single distribution."""
    v = resolve_measure(measure, gain_path)
    dist = load_distribution(dist_path, norm_tolerance(ctx, tolerance))
    emit_value(output, "vulnerability", v.name, v.evaluate(dist))


@main.command("env-vuln")
@click.option("--env", "env_path", required=True, type=INPUT_FILE, help="Environment hyper JSON")
@measure_options
@output_options
@click.pass_context
@handle_errors
def env_vuln(
    ctx: click.Context,
    env_path: Path,
    measure: str,
    gain_path: Path | None,
    tolerance: float | None,
    output: str,
) -> None:
    """Environmental vulnerability: the expected vulnerability over the strategies."""
    v = resolve_measure(measure, gain_path)
    env = load_hyper(env_path, norm_tolerance(ctx, tolerance))
    emit_value(output, "environmental vulnerability", v.name, environmental_vulnerability(v, env))


@main.command("strat-vuln")
@click.option("--env", "env_path", required=True, type=INPUT_FILE, help="Environment hyper JSON")
@click.option("--model", "model_path", type=INPUT_FILE, help="Adversary model hyper JSON")
@measure_options
@output_options
@click.pass_context
@handle_errors
def strat_vuln(
    ctx: click.Context,
    env_path: Path,
    model_path: Path | None,
    measure: str,
    gain_path: Path | None,
    tolerance: float | None,
    output: str,
) -> None:
    """Strategy vulnerability, or strategy vulnerability given a model with --model."""
    v = resolve_measure(measure, gain_path)
    tol = norm_tolerance(ctx, tolerance)
    env = load_hyper(env_path, tol)
    if model_path is None:
        emit_value(output, "strategy vulnerability", v.name, strategy_vulnerability(v, env))
        return
    model = load_hyper(model_path, tol)
    value = strategy_vulnerability_given(v, env, model, get_settings(ctx).feasibility_tolerance)
    emit_value(output, "strategy vulnerability given model", v.name, value)


@main.command("decompose")
@click.option("--env", "env_path", required=True, type=INPUT_FILE, help="Environment hyper JSON")
@click.option("--model", "model_path", type=INPUT_FILE, help="Adversary model hyper JSON")
@measure_options
@output_options
@click.pass_context
@handle_errors
def decompose(
    ctx: click.Context,
    env_path: Path,
    model_path: Path | None,
    measure: str,
    gain_path: Path | None,
    tolerance: float | None,
    output: str,
) -> None:
    """Split perceived security into security by aggregation and by strategy."""
    v = resolve_measure(measure, gain_path)
    tol = norm_tolerance(ctx, tolerance)
    env = load_hyper(env_path, tol)
    if model_path is None:
        d = decompose_security(v, env)
    else:
        model = load_hyper(model_path, tol)
        d = decompose_given(v, env, model, get_settings(ctx).feasibility_tolerance)
    emit(output, dump_decomposition(d), format_decomposition(d))


# --- Abstraction Commands ---


@main.command("abstract")
@click.option("--env", "env_path", required=True, type=INPUT_FILE, help="Environment hyper JSON")
@click.option(
    "--aggregation",
    "aggregation_path",
    required=True,
    type=INPUT_FILE,
    help="Aggregation matrix JSON",
)
@output_options
@click.pass_context
@handle_errors
def abstract(
    ctx: click.Context,
    env_path: Path,
    aggregation_path: Path,
    tolerance: float | None,
    output: str,
) -> None:
    """Apply an aggregation matrix to an environment."""
    tol = norm_tolerance(ctx, tolerance)
    model = apply_aggregation(load_hyper(env_path, tol), load_channel(aggregation_path, tol), tol)
    emit(output, dump_hyper(model), format_hyper_table(model))


@main.command("check-refines")
@click.option("--concrete", "concrete_path", required=True, type=INPUT_FILE, help="Hyper E")
@click.option("--abstract", "abstract_path", required=True, type=INPUT_FILE, help="Hyper M")
@click.option(
    "--emit-witness",
    "witness_path",
    type=click.Path(dir_okay=False, path_type=Path),
    help="Write the aggregation matrix found to this file",
)
@output_options
@click.pass_context
@handle_errors
def check_refines(
    ctx: click.Context,
    concrete_path: Path,
    abstract_path: Path,
    witness_path: Path | None,
    tolerance: float | None,
    output: str,
) -> None:
    """Decide whether the abstract hyper is an abstraction of the concrete one.

    Exits 0 when it is, 1 when it is not.
    """
    tol = norm_tolerance(ctx, tolerance)
    env = load_hyper(concrete_path, tol)
    model = load_hyper(abstract_path, tol)
    witness = check_abstracts(model, env, get_settings(ctx).feasibility_tolerance)
    if witness.matrix is not None and witness_path is not None:
        write_json(dump_channel(witness.matrix, kind="aggregation"), witness_path)
    holds = "yes" if witness.holds else "no"
    table = f"holds: {holds}\nresidual: {format_number(witness.residual)}"
    emit(output, dump_refinement(witness), table)
    if not witness.holds:
        raise SystemExit(EXIT_NEGATIVE)


@main.command("collapse")
@click.option("--hyper", "hyper_path", required=True, type=INPUT_FILE, help="Higher hyper JSON")
@output_options
@click.pass_context
@handle_errors
def collapse_cmd(
    ctx: click.Context,
    hyper_path: Path,
    tolerance: float | None,
    output: str,
) -> None:
    """Flatten a higher-order hyper into an ordinary hyper."""
    flat = collapse(load_higher_hyper(hyper_path, norm_tolerance(ctx, tolerance)))
    emit(output, dump_hyper(flat), format_hyper_table(flat))


# --- Corpus Commands ---


@main.group()
def corpus() -> None:
    """Password corpus case study."""
    pass


def corpus_input_options(func: F) -> F:
    options = [
        click.option(
            "--input",
            "input_path",
            required=True,
            type=INPUT_FILE,
            help="Delimited corpus file with a header row",
        ),
        click.option("--secret-col", default="password", show_default=True),
        click.option("--attr-cols", default="", help="Comma-separated attribute columns"),
        click.option(
            "--delimiter",
            type=click.Choice(list(DELIMITERS)),
            default="auto",
            show_default=True,
        ),
        click.option("--max-bad-rows", type=int, default=None, help="Default from config"),
        click.option(
            "--allow-missing",
            is_flag=True,
            help="Keep rows lacking an attribute (they form an '<unknown>' block)",
        ),
        click.option(
            "--derive-year", is_flag=True, help="Keep passwords embedding a year as attribute"
        ),
        click.option(
            "--random-attr",
            default=None,
            help="NAME=v1,v2,... assigned uniformly at random with the configured seed",
        ),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _split(value: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in value.split(",") if part.strip())


def load_bundle(
    ctx: click.Context,
    input_path: Path,
    secret_col: str,
    attr_cols: str,
    delimiter: str,
    max_bad_rows: int | None,
    allow_missing: bool,
    derive_year: bool,
    random_attr: str | None,
) -> tuple[EnvironmentBundle, tuple[str, ...]]:
    """Ingest and prepare a corpus; returns the bundle and its attribute names in order."""
    settings = get_settings(ctx)
    columns = _split(attr_cols)
    schema = CorpusSchema(
        secret_column=secret_col,
        attribute_columns=columns,
        required=() if allow_missing else columns,
        delimiter=DELIMITERS[delimiter],
    )
    limit = max_bad_rows if max_bad_rows is not None else settings.max_bad_rows
    records = ingest(input_path, schema, limit)
    names = list(columns)
    if derive_year:
        records = derive_year_attribute(records)
        names.append("year")
    if random_attr:
        name, sep, values = random_attr.partition("=")
        if not sep or not _split(values):
            raise click.BadParameter("expected NAME=v1,v2,...", param_hint="--random-attr")
        records = assign_random_attribute(records, name, _split(values), settings.seed)
        names.append(name)
    return build_omniscient(records), tuple(dict.fromkeys(names))


@corpus.command("analyze")
@corpus_input_options
@measure_options
@click.option("--dense", is_flag=True, help="Compute every row from the dense hypers")
@click.option(
    "--output",
    type=click.Choice(["table", "json"]),
    default="table",
    show_default=True,
    help="Output format",
)
@click.pass_context
@handle_errors
def corpus_analyze(
    ctx: click.Context,
    measure: str,
    gain_path: Path | None,
    dense: bool,
    output: str,
    **input_options: Any,
) -> None:
    """Decompose the corpus's perceived security per abstraction."""
    v = resolve_measure(measure, gain_path)
    bundle, names = load_bundle(ctx, **input_options)
    report = decomposition_report(bundle, v, names, dense=dense)
    emit(output, dump_report(report), format_report_table(report))


@corpus.command("plot-data")
@corpus_input_options
@click.option("--attribute", required=True, help="Attribute whose blocks are ranked")
@click.option(
    "--out",
    "out_path",
    required=True,
    type=click.Path(dir_okay=False, path_type=Path),
    help="CSV file to write",
)
@click.pass_context
@handle_errors
def corpus_plot_data(
    ctx: click.Context, attribute: str, out_path: Path, **input_options: Any
) -> None:
    """Write rank/probability data per attribute block."""
    bundle, _ = load_bundle(ctx, **input_options)
    count = write_rank_plot(bundle, attribute, out_path)
    click.echo(f"Wrote {count} rows to {out_path}")


# --- Maintenance Commands ---


@main.command("selftest", hidden=True)
@click.option("--seed", type=int, default=None, help="Default from config / HYPERQIF_SEED")
@click.option("--instances", type=int, default=None, help="Random instances per property")
@click.pass_context
@handle_errors
def selftest(ctx: click.Context, seed: int | None, instances: int | None) -> None:
    """Run the seeded property corpus; exits 1 if any property is violated."""
    settings = get_settings(ctx)
    used_seed = seed if seed is not None else settings.seed
    results = run_selftest(
        used_seed, instances if instances is not None else settings.selftest_instances
    )
    click.echo(f"seed: {used_seed}")
    click.echo(format_selftest_table(results))
    if not all(r.ok for r in results):
        raise SystemExit(EXIT_NEGATIVE)


if __name__ == "__main__":
    main()
