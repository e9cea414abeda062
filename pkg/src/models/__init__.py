"""
Trace Models

Construction events, trace headers and the trace/coloring file formats.
"""
from .trace import (
    EventKind,
    Trace,
    TraceEvent,
    TraceFormatError,
    TraceHeader,
    dumps_coloring,
    parse_coloring,
    parse_trace,
    read_coloring,
    read_trace,
    write_coloring,
    write_trace,
)

__all__ = [
    'EventKind',
    'Trace',
    'TraceEvent',
    'TraceFormatError',
    'TraceHeader',
    'dumps_coloring',
    'parse_coloring',
    'parse_trace',
    'read_coloring',
    'read_trace',
    'write_coloring',
    'write_trace',
]
