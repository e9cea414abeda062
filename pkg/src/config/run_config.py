"""
Run Configuration Loader

Loads a coloring run description from YAML and validates it. Errors point at
the line of the offending node.
"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional, Sequence, Union

import structlog
import yaml
from pydantic import BaseModel, ConfigDict, Field, NonNegativeInt, ValidationError, field_validator

from src.adversaries import StrategyFactory

logger = structlog.get_logger(__name__)

CONFIG_VERSION = "1"


class ConfigError(ValueError):
    """Invalid run configuration; ``line`` is 1-based when known."""

    def __init__(self, message: str, line: Optional[int] = None, path: Optional[Path] = None) -> None:
        where = str(path) if path else "config"
        if line is not None:
            where = f"{where}:{line}"
        super().__init__(f"{where}: {message}")
        self.line = line
        self.path = path


class AdversarySpec(BaseModel):
    model_config = ConfigDict(extra="forbid")

    index: NonNegativeInt
    strategy: str
    params: Dict[str, Any] = Field(default_factory=dict)


class OutputPaths(BaseModel):
    model_config = ConfigDict(extra="forbid")

    trace: Path = Path("out/trace.jsonl")
    coloring: Path = Path("out/coloring.txt")


class RunConfig(BaseModel):
    """
    A coloring run.

    Attributes:
        version: Config format version, ``"1"``.
        n: Forbidden clique size.
        stages: Last stage to color.
        target_max_vertices: Vertex cap for the target witness enumeration.
        outputs: Trace and coloring paths.
        adversaries: Roster entries, indices ``0 .. len - 1``.
    """

    model_config = ConfigDict(extra="forbid")

    version: Literal["1"]
    n: int = Field(ge=3)
    stages: NonNegativeInt
    target_max_vertices: int = Field(default=6, ge=1)
    outputs: OutputPaths = Field(default_factory=OutputPaths)
    adversaries: List[AdversarySpec] = Field(default_factory=list)

    @field_validator("adversaries")
    @classmethod
    def _contiguous_indices(cls, adversaries: List[AdversarySpec]) -> List[AdversarySpec]:
        indices = sorted(a.index for a in adversaries)
        if indices != list(range(len(adversaries))):
            raise ValueError(
                f"adversary indices must be unique and contiguous from 0, got {indices}"
            )
        return adversaries

    def roster_entries(self) -> List[Dict[str, Any]]:
        return [a.model_dump() for a in sorted(self.adversaries, key=lambda a: a.index)]

    def with_base_dir(self, base_dir: Path) -> "RunConfig":
        """Copy with relative output paths resolved against ``base_dir``."""
        outputs = OutputPaths(
            trace=base_dir / self.outputs.trace,
            coloring=base_dir / self.outputs.coloring,
        )
        return self.model_copy(update={"outputs": outputs})


def _node_line(node: Optional[yaml.Node], loc: Sequence[Union[str, int]]) -> Optional[int]:
    """Line of the deepest node reachable along ``loc``."""
    if node is None:
        return None
    line = node.start_mark.line + 1
    for key in loc:
        child = None
        if isinstance(node, yaml.MappingNode):
            for key_node, value_node in node.value:
                if key_node.value == key:
                    child = value_node
                    break
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int):
            if 0 <= key < len(node.value):
                child = node.value[key]
        if child is None:
            break
        node = child
        line = node.start_mark.line + 1
    return line


def parse_run_config(text: str, path: Optional[Path] = None) -> RunConfig:
    """
    Parse and validate config text.

    Raises:
        ConfigError: On YAML syntax errors, schema violations or unknown
            strategy names.
    """
    try:
        data = yaml.safe_load(text)
        root = yaml.compose(text)
    except yaml.MarkedYAMLError as e:
        mark = e.problem_mark or e.context_mark
        raise ConfigError(str(e.problem or e), mark.line + 1 if mark else None, path) from e
    except yaml.YAMLError as e:
        raise ConfigError(str(e), None, path) from e

    if not isinstance(data, dict):
        raise ConfigError("expected a mapping at the top level", 1, path)

    try:
        config = RunConfig(**data)
    except ValidationError as e:
        first = e.errors()[0]
        loc = list(first["loc"])
        raise ConfigError(
            f"{'.'.join(str(p) for p in loc) or 'config'}: {first['msg']}",
            _node_line(root, loc),
            path,
        ) from e

    known = StrategyFactory.list_available_strategies()
    for position, entry in enumerate(data.get("adversaries") or []):
        if entry["strategy"] not in known:
            raise ConfigError(
                f"unknown strategy {entry['strategy']!r}; available: {sorted(known)}",
                _node_line(root, ["adversaries", position, "strategy"]),
                path,
            )
    return config


def load_run_config(path: Union[str, Path]) -> RunConfig:
    """Load a config file and resolve its output paths against its directory."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config: {e.strerror}", None, path) from e
    config = parse_run_config(text, path).with_base_dir(path.parent)
    logger.debug(
        "run_config_loaded",
        path=str(path),
        n=config.n,
        stages=config.stages,
        adversaries=len(config.adversaries),
    )
    return config
