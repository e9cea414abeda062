"""
Unit tests for run configuration loading.
"""
from pathlib import Path

import pytest

from src.config import ConfigError, RunConfig, load_run_config, parse_run_config

def _roster(second_index: int = 1, second_strategy: str = "color-chaser") -> str:
    return (
        'version: "1"\n'
        "n: 3\n"
        "stages: 10\n"
        "adversaries:\n"
        "  - index: 0\n"
        "    strategy: color-chaser\n"
        "    params: {color: R}\n"
        f"  - index: {second_index}\n"
        f"    strategy: {second_strategy}\n"
        "    params: {color: B}\n"
    )


def test_parse_valid_config():
    config = parse_run_config(_roster())
    assert isinstance(config, RunConfig)
    assert config.n == 3
    assert config.stages == 10
    assert config.target_max_vertices == 6
    assert config.outputs.trace == Path("out/trace.jsonl")
    assert config.roster_entries() == [
        {"index": 0, "strategy": "color-chaser", "params": {"color": "R"}},
        {"index": 1, "strategy": "color-chaser", "params": {"color": "B"}},
    ]


def test_minimal_config_defaults():
    config = parse_run_config('version: "1"\nn: 4\nstages: 0\n')
    assert config.adversaries == []
    assert config.roster_entries() == []


def test_schema_error_points_at_line():
    """Test that a bad value is reported at its own line."""
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config('version: "1"\nn: 2\nstages: 10\n', Path("run.yaml"))
    assert exc_info.value.line == 2
    assert str(exc_info.value).startswith("run.yaml:2: n:")


def test_nested_error_points_at_line():
    text = _roster().replace("  - index: 0", "  - index: -1")
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config(text)
    assert exc_info.value.line == 5


def test_non_contiguous_indices():
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config(_roster(second_index=2))
    assert "contiguous" in str(exc_info.value)
    assert exc_info.value.line == 5


def test_unknown_strategy():
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config(_roster(second_strategy="oracle"))
    assert "unknown strategy 'oracle'" in str(exc_info.value)
    assert exc_info.value.line == 9


def test_wrong_version():
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config('version: "2"\nn: 3\nstages: 1\n')
    assert exc_info.value.line == 1


def test_yaml_syntax_error():
    with pytest.raises(ConfigError) as exc_info:
        parse_run_config('version: "1"\nn: [3\nstages: 1\n')
    assert exc_info.value.line is not None


def test_top_level_must_be_mapping():
    with pytest.raises(ConfigError):
        parse_run_config("- 1\n- 2\n")


def test_load_resolves_outputs(sample_config_path):
    """Test that output paths are taken relative to the config file."""
    config = load_run_config(sample_config_path)
    assert config.n == 3
    assert len(config.adversaries) == 5
    assert config.outputs.trace == sample_config_path.parent / "../out/sample/trace.jsonl"


def test_load_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_run_config(tmp_path / "missing.yaml")


def test_load_written_config(write_config):
    path = write_config('version: "1"\nn: 3\nstages: 5\ntarget_max_vertices: 7\n')
    config = load_run_config(path)
    assert config.target_max_vertices == 7
    assert config.outputs.coloring == path.parent / "out" / "coloring.txt"
