"""
Trace and coloring file models.

A trace is a JSON-lines file: one header record, then one record per
construction event in emission order. A coloring file is a header line
followed by ``"<stage> <color>"`` lines.
"""
import json
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterable, List, Literal, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, ValidationError

from src.adversaries import Color

TRACE_FORMAT = "henson-trace"
TRACE_VERSION = 1
COLORING_FORMAT = "henson-coloring"
COLORING_VERSION = 1


class TraceFormatError(ValueError):
    """A trace or coloring file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        super().__init__(f"line {line}: {message}" if line is not None else message)
        self.line = line


class EventKind(str, Enum):
    STAGE_START = "StageStart"
    ACTIVATED = "Activated"
    FIRST_FOLLOWER = "FirstFollower"
    TARGET_CHOSEN = "TargetChosen"
    NEW_FOLLOWER = "NewFollower"
    RESERVED = "Reserved"
    INJURED = "Injured"
    COLORED = "Colored"


class TraceEvent(BaseModel):
    """
    One construction event.

    Fields used per kind:
        StageStart: ``stage``
        Activated: ``requirement``
        FirstFollower, NewFollower: ``requirement``, ``vertex``, ``enumerated_at``
        TargetChosen: ``requirement``, ``graph6``, ``k``
        Reserved: ``requirement``, ``entry``, ``vertex`` (anchor), ``color``,
            ``threshold``, ``blocked_by``
        Injured: ``requirement``, ``injured_by``
        Colored: ``vertex``, ``color``
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    kind: EventKind
    stage: int
    requirement: Optional[int] = None
    vertex: Optional[int] = None
    color: Optional[Color] = None
    graph6: Optional[str] = None
    k: Optional[int] = None
    entry: Optional[int] = None
    threshold: Optional[int] = None
    blocked_by: Optional[Tuple[int, ...]] = None
    enumerated_at: Optional[int] = None
    injured_by: Optional[int] = None

    def to_json(self) -> str:
        return self.model_dump_json(exclude_none=True)


class TraceHeader(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    format: Literal["henson-trace"] = TRACE_FORMAT
    version: int = TRACE_VERSION
    n: int
    stages: int
    adversaries: List[Dict[str, Any]]


@dataclass
class Trace:
    """A header plus the ordered construction events."""

    header: TraceHeader
    events: List[TraceEvent] = field(default_factory=list)

    def dumps(self) -> str:
        lines = [self.header.model_dump_json()]
        lines.extend(event.to_json() for event in self.events)
        return "\n".join(lines) + "\n"

    def by_stage(self) -> Dict[int, List[TraceEvent]]:
        grouped: Dict[int, List[TraceEvent]] = {}
        for event in self.events:
            grouped.setdefault(event.stage, []).append(event)
        return grouped

    def of_kind(self, kind: EventKind) -> List[TraceEvent]:
        return [event for event in self.events if event.kind is kind]


def write_trace(trace: Trace, path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(trace.dumps())


def parse_trace(lines: Iterable[str]) -> Trace:
    """
    Parse trace records.

    Raises:
        TraceFormatError: Bad JSON, unknown fields or kinds, or an
            unsupported header.
    """
    header: Optional[TraceHeader] = None
    events: List[TraceEvent] = []
    for line_number, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"invalid JSON: {e.msg}", line_number) from e
        if not isinstance(record, dict):
            raise TraceFormatError("expected a JSON object", line_number)
        try:
            if header is None:
                if record.get("format") != TRACE_FORMAT:
                    raise TraceFormatError("missing trace header", line_number)
                if record.get("version") != TRACE_VERSION:
                    raise TraceFormatError(
                        f"unsupported trace version {record.get('version')}", line_number
                    )
                header = TraceHeader(**record)
            else:
                events.append(TraceEvent(**record))
        except (ValidationError, TypeError) as e:
            raise TraceFormatError(str(e), line_number) from e
    if header is None:
        raise TraceFormatError("empty trace")
    return Trace(header, events)


def read_trace(path: Union[str, Path]) -> Trace:
    with open(path, encoding="utf-8") as f:
        return parse_trace(f)


def dumps_coloring(colors: List[Color], n: int) -> str:
    lines = [f"# {COLORING_FORMAT} v{COLORING_VERSION} n={n} stages={len(colors) - 1}"]
    lines.extend(f"{stage} {color.value}" for stage, color in enumerate(colors))
    return "\n".join(lines) + "\n"


def write_coloring(colors: List[Color], n: int, path: Union[str, Path]) -> None:
    Path(path).parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write(dumps_coloring(colors, n))


def parse_coloring(lines: Iterable[str]) -> Tuple[int, List[Color]]:
    """
    Parse a coloring file into ``(n, colors)``.

    Raises:
        TraceFormatError: Bad header, out-of-order stages or unknown colors.
    """
    n: Optional[int] = None
    stages = -1
    colors: List[Color] = []
    for line_number, line in enumerate(lines, start=1):
        text = line.strip()
        if not text:
            continue
        if n is None:
            parts = text.split()
            if parts[:3] != ["#", COLORING_FORMAT, f"v{COLORING_VERSION}"] or len(parts) != 5:
                raise TraceFormatError("missing or unsupported coloring header", line_number)
            try:
                n = int(parts[3].removeprefix("n="))
                stages = int(parts[4].removeprefix("stages="))
            except ValueError as e:
                raise TraceFormatError(f"bad coloring header: {text}", line_number) from e
            continue
        try:
            stage_text, color_text = text.split()
            stage = int(stage_text)
            color = Color(color_text)
        except ValueError as e:
            raise TraceFormatError(f"bad coloring line: {text!r}", line_number) from e
        if stage != len(colors):
            raise TraceFormatError(f"expected stage {len(colors)}, got {stage}", line_number)
        colors.append(color)
    if n is None:
        raise TraceFormatError("empty coloring file")
    if len(colors) != stages + 1:
        raise TraceFormatError(f"header promises stages 0..{stages}, found {len(colors)} lines")
    return n, colors


def read_coloring(path: Union[str, Path]) -> Tuple[int, List[Color]]:
    with open(path, encoding="utf-8") as f:
        return parse_coloring(f)
