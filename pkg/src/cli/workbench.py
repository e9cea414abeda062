"""
Henson Workbench CLI

Batch commands over the presentation, the witness search, the coloring
construction and its verifier. Artifacts go to files or stdout; summaries and
logs go to stderr.

Exit codes: 0 success, 1 usage or config error, 2 verification failure,
3 search exhaustion.
"""
import sys
from pathlib import Path
from typing import Any, List, Optional, Sequence

import click
import structlog
from rich.console import Console
from rich.table import Table

from src.adversaries import AdversaryRegistrationError, StrategyFactory, build_roster
from src.config import ConfigError, load_run_config
from src.graphs import encode_graph6
from src.logging import setup_logging
from src.models import TraceFormatError, read_coloring, read_trace, write_coloring, write_trace
from src.presentation import Presentation
from src.search import FolkmanCertificate, FolkmanSearchExhausted, folkman_witness
from src.services import (
    ColoringRun,
    ConstructionInvariantError,
    PriorityColoringService,
    VerificationReport,
    verify_trace,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION_FAILED = 2
EXIT_SEARCH_EXHAUSTED = 3

console = Console(stderr=True)
logger = structlog.get_logger(__name__)


class WorkbenchGroup(click.Group):
    """Click group that turns results and usage errors into the workbench exit codes."""

    def main(self, args: Optional[Sequence[str]] = None, prog_name: Optional[str] = None,
             complete_var: Optional[str] = None, **extra: Any) -> None:  # type: ignore[override]
        extra.pop("standalone_mode", None)
        try:
            rv = super().main(args, prog_name, complete_var, standalone_mode=False, **extra)
        except click.ClickException as e:
            e.show()
            sys.exit(EXIT_USAGE)
        except click.Abort:
            click.echo("Aborted!", err=True)
            sys.exit(EXIT_USAGE)
        sys.exit(rv if isinstance(rv, int) else EXIT_OK)


def _fail(message: str, code: int) -> int:
    click.echo(f"Error: {message}", err=True)
    return code


@click.group(cls=WorkbenchGroup)
@click.option('--log-level', default='WARNING',
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False),
              help='Minimum log level written to stderr')
@click.option('--log-json', is_flag=True, help='Render logs as JSON lines')
def cli(log_level: str, log_json: bool) -> None:
    """Computable Henson graph presentation and priority coloring workbench."""
    setup_logging(log_level.upper(), json_output=log_json)


def _write_text(text: str, out: Optional[str]) -> None:
    if out is None:
        click.echo(text, nl=False)
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="ascii")


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Forbidden clique size (at least 3)')
@click.option('--m', 'm', type=click.IntRange(min=0), required=True,
              help='Number of vertices to write')
@click.option('--format', 'fmt', default='graph6', type=click.Choice(['graph6', 'adjlist']),
              help='Output format')
@click.option('--out', type=click.Path(dir_okay=False), help='Output file (default: stdout)')
def present(n: int, m: int, fmt: str, out: Optional[str]) -> int:
    """Write the first M vertices of the presentation of H_N."""
    if n < 3:
        raise click.BadParameter(f"must be at least 3, got {n}", param_hint="'--n'")
    graph = Presentation(n).restriction(m)
    if fmt == 'graph6':
        text = encode_graph6(graph) + "\n"
    else:
        text = "".join(
            f"{x}:" + "".join(f" {v}" for v in graph.neighbors(x)) + "\n" for x in range(m)
        )
    _write_text(text, out)
    logger.info("presentation_written", n=n, m=m, format=fmt, out=out)
    return EXIT_OK


def _certificate_table(certificate: FolkmanCertificate) -> Table:
    table = Table(title="Folkman witness")
    table.add_column("Field", style="cyan")
    table.add_column("Value")
    for key, value in certificate.summary().items():
        table.add_row(key, str(value))
    return table


@cli.command()
@click.option('--n', 'n', type=int, required=True, help='Forbidden clique size (at least 3)')
@click.option('--k', 'k', type=click.IntRange(min=1), required=True,
              help='Number of partition blocks to defeat')
@click.option('--max-vertices', type=click.IntRange(min=1), default=6, show_default=True,
              help='Largest graph size to enumerate')
@click.option('--out', type=click.Path(dir_okay=False), help='Output file (default: stdout)')
def folkman(n: int, k: int, max_vertices: int, out: Optional[str]) -> int:
    """Search for the first witness defeating every K-partition."""
    if n < 3:
        raise click.BadParameter(f"must be at least 3, got {n}", param_hint="'--n'")
    try:
        certificate = folkman_witness(n, k, max_vertices)
    except FolkmanSearchExhausted as e:
        return _fail(str(e), EXIT_SEARCH_EXHAUSTED)
    _write_text(encode_graph6(certificate.graph) + "\n", out)
    console.print(_certificate_table(certificate))
    return EXIT_OK


def _run_summary(run: ColoringRun) -> Table:
    table = Table(title=f"Coloring run (n={run.n}, stages={run.stages})")
    table.add_column("Requirement", justify="right")
    table.add_column("Color")
    table.add_column("Active")
    table.add_column("Followers", justify="right")
    table.add_column("Target", justify="right")
    table.add_column("Injuries", justify="right")
    for r in run.requirements:
        table.add_row(
            str(r.priority),
            r.color.value,
            "yes" if r.active else "no",
            str(len(r.followers)),
            "-" if r.target is None else f"{r.target.size}v (k={r.target.k})",
            str(r.injuries),
        )
    return table


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              required=True, help='Run configuration (YAML)')
@click.option('--stages', type=click.IntRange(min=0), help='Override the configured stage count')
@click.option('--out', 'out_dir', type=click.Path(file_okay=False),
              help='Directory for trace.jsonl and coloring.txt')
def color(config_path: str, stages: Optional[int], out_dir: Optional[str]) -> int:
    """Run the priority construction and write the trace and coloring."""
    try:
        config = load_run_config(config_path)
        roster = build_roster(config.roster_entries(), config.n)
    except (ConfigError, AdversaryRegistrationError, ValueError) as e:
        return _fail(str(e), EXIT_USAGE)

    trace_path, coloring_path = config.outputs.trace, config.outputs.coloring
    if out_dir is not None:
        trace_path = Path(out_dir) / "trace.jsonl"
        coloring_path = Path(out_dir) / "coloring.txt"

    service = PriorityColoringService(
        config.n, roster, target_max_vertices=config.target_max_vertices
    )
    try:
        run = service.run(config.stages if stages is None else stages)
    except FolkmanSearchExhausted as e:
        return _fail(str(e), EXIT_SEARCH_EXHAUSTED)
    except ConstructionInvariantError as e:
        write_trace(e.trace, trace_path)
        return _fail(f"{e} (partial trace written to {trace_path})", EXIT_VERIFICATION_FAILED)

    write_trace(run.trace, trace_path)
    write_coloring(run.colors, run.n, coloring_path)
    console.print(_run_summary(run))
    console.print(f"Trace: {trace_path}\nColoring: {coloring_path}")
    return EXIT_OK


def _report_table(report: VerificationReport) -> Table:
    table = Table(title="Trace verification")
    table.add_column("Check", style="cyan")
    table.add_column("Description")
    table.add_column("Result")
    table.add_column("First failure")
    for check in report.checks:
        table.add_row(
            check.name,
            check.description,
            "[green]pass[/green]" if check.passed else f"[red]FAIL ({check.failure_count})[/red]",
            check.failures[0] if check.failures else "",
        )
    return table


@cli.command()
@click.option('--config', 'config_path', type=click.Path(exists=True, dir_okay=False),
              required=True, help='Run configuration (YAML)')
@click.option('--trace', 'trace_path', type=click.Path(dir_okay=False),
              help='Trace file (default: the configured output)')
@click.option('--coloring', 'coloring_path', type=click.Path(dir_okay=False),
              help='Coloring file (default: the configured output)')
def verify(config_path: str, trace_path: Optional[str], coloring_path: Optional[str]) -> int:
    """Check a trace and coloring against the construction's guarantees."""
    try:
        config = load_run_config(config_path)
    except ConfigError as e:
        return _fail(str(e), EXIT_USAGE)

    try:
        trace = read_trace(trace_path or config.outputs.trace)
        n, colors = read_coloring(coloring_path or config.outputs.coloring)
    except OSError as e:
        return _fail(f"cannot read artifact: {e}", EXIT_USAGE)
    except TraceFormatError as e:
        return _fail(str(e), EXIT_VERIFICATION_FAILED)

    problems: List[str] = []
    if trace.header.n != config.n or n != config.n:
        problems.append(f"n differs: config {config.n}, trace {trace.header.n}, coloring {n}")
    if problems:
        return _fail("; ".join(problems), EXIT_VERIFICATION_FAILED)

    report = verify_trace(
        trace,
        colors,
        Presentation(config.n),
        config.roster_entries(),
        target_max_vertices=config.target_max_vertices,
    )
    console.print(_report_table(report))
    if not report.passed:
        return _fail(f"verification failed: {', '.join(report.failed())}", EXIT_VERIFICATION_FAILED)
    return EXIT_OK


@cli.command()
def strategies() -> int:
    """List the adversary strategies available to roster configs."""
    table = Table(title="Adversary strategies")
    table.add_column("Name", style="cyan")
    table.add_column("Description")
    for name, description in StrategyFactory.list_available_strategies().items():
        table.add_row(name, description)
    console.print(table)
    return EXIT_OK
