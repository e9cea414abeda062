"""
graph6 codec.

Layout: a size prefix (one byte ``chr(63 + N)`` for ``N <= 62``, otherwise
``~`` followed by ``N`` in three 6-bit bytes for ``N <= 258047``), then the
upper triangle of the adjacency matrix read column by column
(``(0,1), (0,2), (1,2), (0,3), ...``), packed six bits per byte, zero padded,
each byte offset by 63. The 6-byte size prefix for larger graphs is not
supported.
"""
from pathlib import Path
from typing import Iterable, List, Tuple, Union

from .finite_graph import FiniteGraph

HEADER = ">>graph6<<"
MAX_SMALL_VERTICES = 62
MAX_VERTICES = 258047
_OFFSET = 63
_LAST_PRINTABLE = 126
_WIDE_MARKER = 126


class Graph6DecodeError(ValueError):
    """Malformed graph6 text; ``position`` is the index of the first bad byte."""

    def __init__(self, message: str, position: int) -> None:
        super().__init__(f"{message} (at byte {position})")
        self.reason = message
        self.position = position


def _pair_bits(g: FiniteGraph) -> List[int]:
    return [
        1 if g.has_edge(i, j) else 0
        for j in range(1, g.vertex_count)
        for i in range(j)
    ]


def _size_prefix(vertex_count: int) -> str:
    if vertex_count <= MAX_SMALL_VERTICES:
        return chr(_OFFSET + vertex_count)
    return chr(_WIDE_MARKER) + "".join(
        chr(_OFFSET + (vertex_count >> shift & 0x3F)) for shift in (12, 6, 0)
    )


def encode_graph6(g: FiniteGraph) -> str:
    """Encode ``g`` without header or trailing newline."""
    if g.vertex_count > MAX_VERTICES:
        raise ValueError(
            f"Only graphs with at most {MAX_VERTICES} vertices are supported, "
            f"got {g.vertex_count}"
        )
    bits = _pair_bits(g)
    bits.extend([0] * (-len(bits) % 6))
    chars = [_size_prefix(g.vertex_count)]
    for start in range(0, len(bits), 6):
        value = 0
        for bit in bits[start:start + 6]:
            value = value << 1 | bit
        chars.append(chr(_OFFSET + value))
    return "".join(chars)


def _read_size(body: str, base: int) -> Tuple[int, int]:
    """Vertex count and length of the size prefix."""
    first = ord(body[0]) - _OFFSET
    if first <= MAX_SMALL_VERTICES:
        return first, 1
    if len(body) < 4:
        raise Graph6DecodeError("Truncated size prefix", base + len(body))
    if ord(body[1]) == _WIDE_MARKER:
        raise Graph6DecodeError("Graphs above 258047 vertices are not supported", base + 1)
    size = 0
    for char in body[1:4]:
        size = size << 6 | (ord(char) - _OFFSET)
    if size <= MAX_SMALL_VERTICES:
        raise Graph6DecodeError("Non-canonical size prefix", base + 1)
    return size, 4


def decode_graph6(text: str) -> FiniteGraph:
    """
    Decode one graph6 string.

    A leading ``>>graph6<<`` header and a trailing newline are accepted.

    Raises:
        Graph6DecodeError: On the first byte that cannot belong to a valid
            encoding.
    """
    base = 0
    if text.startswith(HEADER):
        base = len(HEADER)
    body = text[base:].rstrip("\r\n")
    if not body:
        raise Graph6DecodeError("Missing size byte", base)

    for offset, char in enumerate(body):
        if not _OFFSET <= ord(char) <= _LAST_PRINTABLE:
            raise Graph6DecodeError(f"Byte {char!r} outside the graph6 range", base + offset)

    size, prefix = _read_size(body, base)
    pair_count = size * (size - 1) // 2
    expected = prefix + (pair_count + 5) // 6
    if len(body) < expected:
        raise Graph6DecodeError(
            f"Truncated encoding: expected {expected} bytes, got {len(body)}", base + len(body)
        )
    if len(body) > expected:
        raise Graph6DecodeError(
            f"Trailing bytes: expected {expected} bytes, got {len(body)}", base + expected
        )

    bits: List[int] = []
    for char in body[prefix:]:
        value = ord(char) - _OFFSET
        bits.extend((value >> shift) & 1 for shift in range(5, -1, -1))
    if any(bits[pair_count:]):
        raise Graph6DecodeError("Nonzero padding bits", base + expected - 1)

    edges = []
    position = 0
    for j in range(1, size):
        for i in range(j):
            if bits[position]:
                edges.append((i, j))
            position += 1
    return FiniteGraph.from_edges(size, edges)


def write_graph6_lines(graphs: Iterable[FiniteGraph], path: Union[str, Path]) -> None:
    with open(path, "w", encoding="ascii") as f:
        for g in graphs:
            f.write(encode_graph6(g) + "\n")


def read_graph6_lines(path: Union[str, Path]) -> List[FiniteGraph]:
    graphs = []
    with open(path, encoding="ascii") as f:
        for line_number, line in enumerate(f, start=1):
            if not line.strip():
                continue
            try:
                graphs.append(decode_graph6(line))
            except Graph6DecodeError as e:
                raise Graph6DecodeError(f"Line {line_number}: {e.reason}", e.position) from e
    return graphs
