"""
Test configuration and fixtures for the Henson workbench.
"""
from pathlib import Path
from typing import Callable, Dict, List

import pytest

from src.presentation import Presentation


@pytest.fixture(scope="session")
def workspace_root() -> Path:
    """Get the workspace root directory."""
    return Path(__file__).parents[1]


@pytest.fixture
def presentation3() -> Presentation:
    """A fresh presentation of H_3."""
    return Presentation(3)


@pytest.fixture(scope="session")
def shared_presentation3() -> Presentation:
    """A presentation of H_3 shared across slow tests; it only ever grows."""
    return Presentation(3)


@pytest.fixture
def chaser_entries() -> List[Dict]:
    """Roster with a single red color-chaser."""
    return [{"index": 0, "strategy": "color-chaser", "params": {"color": "R"}}]


@pytest.fixture
def injury_entries() -> List[Dict]:
    """Roster whose run acquires a new follower and injures a weaker requirement."""
    return [
        {"index": 0, "strategy": "constant-set", "params": {"elements": [0, 2]}},
        {"index": 1, "strategy": "constant-set", "params": {"elements": [1, 4, 13]}},
    ]


@pytest.fixture
def injury_config_path(workspace_root) -> Path:
    return workspace_root / "config" / "injury_roster.yaml"


@pytest.fixture
def sample_config_path(workspace_root) -> Path:
    return workspace_root / "config" / "sample_roster.yaml"


@pytest.fixture
def empty_config_path(workspace_root) -> Path:
    return workspace_root / "config" / "empty_roster.yaml"


@pytest.fixture
def write_config(tmp_path) -> Callable[[str], Path]:
    """Write config text into a temporary directory and return its path."""

    def _write(text: str, name: str = "run.yaml") -> Path:
        path = tmp_path / name
        path.write_text(text, encoding="utf-8")
        return path

    return _write
