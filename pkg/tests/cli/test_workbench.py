"""
Tests for the workbench CLI and its exit codes.
"""
import pytest
from click.testing import CliRunner

from src.cli.workbench import (
    EXIT_OK,
    EXIT_SEARCH_EXHAUSTED,
    EXIT_USAGE,
    EXIT_VERIFICATION_FAILED,
    cli,
)
from src.graphs import decode_graph6
from src.models import EventKind, read_coloring, read_trace

CHASER_CONFIG = """\
version: "1"
n: 3
stages: 30
adversaries:
  - index: 0
    strategy: color-chaser
    params: {color: R}
"""


@pytest.fixture
def cli_runner():
    """Create a Click CLI test runner."""
    return CliRunner()


@pytest.fixture
def chaser_config(write_config):
    return write_config(CHASER_CONFIG)


def test_present_empty_prefix(cli_runner):
    result = cli_runner.invoke(cli, ["present", "--n", "3", "--m", "0"])
    assert result.exit_code == EXIT_OK
    assert result.output == "?\n"


def test_present_graph6(cli_runner):
    result = cli_runner.invoke(cli, ["present", "--n", "3", "--m", "3"])
    assert result.exit_code == EXIT_OK
    assert result.output == "BO\n"


def test_present_adjlist(cli_runner, tmp_path):
    out = tmp_path / "prefix.txt"
    result = cli_runner.invoke(
        cli, ["present", "--n", "3", "--m", "3", "--format", "adjlist", "--out", str(out)]
    )
    assert result.exit_code == EXIT_OK
    assert out.read_text() == "0: 2\n1:\n2: 0\n"


@pytest.mark.parametrize(
    "args",
    [
        ["present", "--n", "2", "--m", "5"],
        ["present", "--n", "3", "--m", "-1"],
        ["folkman", "--n", "3", "--k", "0"],
        ["no-such-command"],
        ["color", "--config", "missing.yaml"],
    ],
)
def test_usage_errors(cli_runner, args):
    """Test that bad arguments exit with the usage code."""
    result = cli_runner.invoke(cli, args)
    assert result.exit_code == EXIT_USAGE


def test_help(cli_runner):
    result = cli_runner.invoke(cli, ["--help"])
    assert result.exit_code == EXIT_OK
    assert "verify" in result.output


def test_folkman_witness(cli_runner, tmp_path):
    out = tmp_path / "witness.g6"
    result = cli_runner.invoke(cli, ["folkman", "--n", "3", "--k", "2", "--out", str(out)])
    assert result.exit_code == EXIT_OK
    witness = decode_graph6(out.read_text())
    assert witness.vertex_count == 5
    assert witness.edge_count() == 5


def test_folkman_exhaustion(cli_runner):
    result = cli_runner.invoke(cli, ["folkman", "--n", "3", "--k", "2", "--max-vertices", "4"])
    assert result.exit_code == EXIT_SEARCH_EXHAUSTED


def test_strategies(cli_runner):
    result = cli_runner.invoke(cli, ["strategies"])
    assert result.exit_code == EXIT_OK
    assert "greedy-copier" in result.output


def test_color_then_verify(cli_runner, chaser_config):
    """Test a full color and verify cycle through the configured outputs."""
    result = cli_runner.invoke(cli, ["color", "--config", str(chaser_config)])
    assert result.exit_code == EXIT_OK, result.output

    trace_path = chaser_config.parent / "out" / "trace.jsonl"
    coloring_path = chaser_config.parent / "out" / "coloring.txt"
    assert read_trace(trace_path).header.stages == 30
    n, colors = read_coloring(coloring_path)
    assert n == 3 and len(colors) == 31

    result = cli_runner.invoke(cli, ["verify", "--config", str(chaser_config)])
    assert result.exit_code == EXIT_OK, result.output


def test_color_with_overrides(cli_runner, chaser_config, tmp_path):
    out_dir = tmp_path / "custom"
    result = cli_runner.invoke(
        cli, ["color", "--config", str(chaser_config), "--stages", "5", "--out", str(out_dir)]
    )
    assert result.exit_code == EXIT_OK
    assert read_trace(out_dir / "trace.jsonl").header.stages == 5
    result = cli_runner.invoke(
        cli,
        [
            "verify",
            "--config", str(chaser_config),
            "--trace", str(out_dir / "trace.jsonl"),
            "--coloring", str(out_dir / "coloring.txt"),
        ],
    )
    assert result.exit_code == EXIT_OK


def test_color_rejects_bad_config(cli_runner, write_config):
    path = write_config('version: "1"\nn: 2\nstages: 5\n')
    result = cli_runner.invoke(cli, ["color", "--config", str(path)])
    assert result.exit_code == EXIT_USAGE
    assert "n:" in result.output


def test_verify_detects_tampered_coloring(cli_runner, chaser_config):
    cli_runner.invoke(cli, ["color", "--config", str(chaser_config)])
    coloring_path = chaser_config.parent / "out" / "coloring.txt"
    text = coloring_path.read_text()
    coloring_path.write_text(text.replace("\n2 B\n", "\n2 R\n"))
    result = cli_runner.invoke(cli, ["verify", "--config", str(chaser_config)])
    assert result.exit_code == EXIT_VERIFICATION_FAILED
    assert "V3" in result.output


def test_verify_rejects_malformed_trace(cli_runner, chaser_config):
    cli_runner.invoke(cli, ["color", "--config", str(chaser_config)])
    trace_path = chaser_config.parent / "out" / "trace.jsonl"
    trace_path.write_text(trace_path.read_text() + "{broken\n")
    result = cli_runner.invoke(cli, ["verify", "--config", str(chaser_config)])
    assert result.exit_code == EXIT_VERIFICATION_FAILED


def test_verify_missing_artifacts(cli_runner, chaser_config):
    result = cli_runner.invoke(cli, ["verify", "--config", str(chaser_config)])
    assert result.exit_code == EXIT_USAGE


def test_verify_rejects_other_n(cli_runner, chaser_config, write_config):
    cli_runner.invoke(cli, ["color", "--config", str(chaser_config)])
    other = write_config(CHASER_CONFIG.replace("n: 3", "n: 4"), name="other.yaml")
    result = cli_runner.invoke(cli, ["verify", "--config", str(other)])
    assert result.exit_code == EXIT_VERIFICATION_FAILED


def test_injury_roster_round_trip(cli_runner, injury_config_path, tmp_path):
    """Test the shipped injury roster: a new follower, an injury and a clean verify."""
    out_dir = tmp_path / "injury"
    result = cli_runner.invoke(
        cli, ["color", "--config", str(injury_config_path), "--out", str(out_dir)]
    )
    assert result.exit_code == EXIT_OK, result.output
    trace = read_trace(out_dir / "trace.jsonl")
    assert len(trace.of_kind(EventKind.NEW_FOLLOWER)) > 0
    assert len(trace.of_kind(EventKind.INJURED)) > 0

    result = cli_runner.invoke(
        cli,
        [
            "verify",
            "--config", str(injury_config_path),
            "--trace", str(out_dir / "trace.jsonl"),
            "--coloring", str(out_dir / "coloring.txt"),
        ],
    )
    assert result.exit_code == EXIT_OK, result.output

    lines = (out_dir / "trace.jsonl").read_text().splitlines(keepends=True)
    kept = [line for line in lines if '"NewFollower"' not in line]
    assert len(kept) == len(lines) - 1
    (out_dir / "trace.jsonl").write_text("".join(kept))
    result = cli_runner.invoke(
        cli,
        [
            "verify",
            "--config", str(injury_config_path),
            "--trace", str(out_dir / "trace.jsonl"),
            "--coloring", str(out_dir / "coloring.txt"),
        ],
    )
    assert result.exit_code == EXIT_VERIFICATION_FAILED
    assert "V5" in result.output
