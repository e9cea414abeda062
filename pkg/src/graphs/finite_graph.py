"""
File: finite_graph.py
---------------------
Immutable finite simple graphs on dense 0-based vertex indices.

Adjacency is kept as one integer bitmask per vertex, so neighbourhood
intersections inside the search routines are single integer operations.
"""
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Tuple


@dataclass(frozen=True)
class FiniteGraph:
    """
    A simple undirected graph on the vertices ``0 .. vertex_count - 1``.

    Args:
        vertex_count: Number of vertices.
        masks: ``masks[v]`` has bit ``u`` set iff ``u`` and ``v`` are adjacent.

    Raises:
        ValueError: If the masks are not symmetric, have self-loops or
            reference vertices out of range.
    """

    vertex_count: int
    masks: Tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.vertex_count < 0:
            raise ValueError(f"vertex_count must be nonnegative, got {self.vertex_count}")
        if len(self.masks) != self.vertex_count:
            raise ValueError(
                f"Expected {self.vertex_count} adjacency masks, got {len(self.masks)}"
            )
        full = (1 << self.vertex_count) - 1
        for v, mask in enumerate(self.masks):
            if mask & ~full:
                raise ValueError(f"Vertex {v} is adjacent to a vertex out of range")
            if mask >> v & 1:
                raise ValueError(f"Vertex {v} has a self-loop")
            rest = mask
            while rest:
                low = rest & -rest
                u = low.bit_length() - 1
                if not self.masks[u] >> v & 1:
                    raise ValueError(f"Adjacency is not symmetric on ({v}, {u})")
                rest ^= low

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[Tuple[int, int]]) -> "FiniteGraph":
        """Build a graph from an edge list."""
        masks = [0] * vertex_count
        for i, j in edges:
            if i == j:
                raise ValueError(f"Self-loop on vertex {i}")
            if not (0 <= i < vertex_count and 0 <= j < vertex_count):
                raise ValueError(f"Edge ({i}, {j}) out of range for {vertex_count} vertices")
            masks[i] |= 1 << j
            masks[j] |= 1 << i
        return cls(vertex_count, tuple(masks))

    @classmethod
    def from_matrix(cls, matrix: List[List[bool]]) -> "FiniteGraph":
        """Build a graph from a boolean adjacency matrix."""
        masks = []
        for row in matrix:
            mask = 0
            for j, bit in enumerate(row):
                if bit:
                    mask |= 1 << j
            masks.append(mask)
        return cls(len(matrix), tuple(masks))

    @classmethod
    def empty(cls, vertex_count: int = 0) -> "FiniteGraph":
        return cls(vertex_count, (0,) * vertex_count)

    @classmethod
    def complete(cls, vertex_count: int) -> "FiniteGraph":
        full = (1 << vertex_count) - 1
        return cls(vertex_count, tuple(full ^ (1 << v) for v in range(vertex_count)))

    @classmethod
    def cycle(cls, vertex_count: int) -> "FiniteGraph":
        if vertex_count < 3:
            raise ValueError("A cycle needs at least 3 vertices")
        return cls.from_edges(
            vertex_count, ((v, (v + 1) % vertex_count) for v in range(vertex_count))
        )

    @classmethod
    def path(cls, vertex_count: int) -> "FiniteGraph":
        return cls.from_edges(vertex_count, ((v, v + 1) for v in range(vertex_count - 1)))

    @classmethod
    def star(cls, vertex_count: int, center: int = 0) -> "FiniteGraph":
        return cls.from_edges(
            vertex_count, ((center, v) for v in range(vertex_count) if v != center)
        )

    @property
    def full_mask(self) -> int:
        return (1 << self.vertex_count) - 1

    def has_edge(self, i: int, j: int) -> bool:
        return bool(self.masks[i] >> j & 1)

    def neighbors(self, v: int) -> List[int]:
        """Sorted neighbours of ``v``."""
        return list(iter_bits(self.masks[v]))

    def degree(self, v: int) -> int:
        return bin(self.masks[v]).count("1")

    def edges(self) -> Iterator[Tuple[int, int]]:
        """Edges ``(i, j)`` with ``i < j`` in ascending order."""
        for i in range(self.vertex_count):
            for j in iter_bits(self.masks[i] >> (i + 1)):
                yield i, i + 1 + j

    def edge_count(self) -> int:
        return sum(self.degree(v) for v in range(self.vertex_count)) // 2

    def adjacency_matrix(self) -> List[List[bool]]:
        return [
            [self.has_edge(i, j) for j in range(self.vertex_count)]
            for i in range(self.vertex_count)
        ]

    def restrict(self, m: int) -> "FiniteGraph":
        """Induced subgraph on the first ``m`` vertices."""
        if not 0 <= m <= self.vertex_count:
            raise ValueError(f"Restriction size {m} out of range [0, {self.vertex_count}]")
        keep = (1 << m) - 1
        return FiniteGraph(m, tuple(mask & keep for mask in self.masks[:m]))

    def induced(self, vertices: Iterable[int]) -> "FiniteGraph":
        """Induced subgraph on ``vertices``, relabelled by their order in the iterable."""
        chosen = list(vertices)
        index = {v: pos for pos, v in enumerate(chosen)}
        masks = []
        for v in chosen:
            mask = 0
            for u in iter_bits(self.masks[v]):
                pos = index.get(u)
                if pos is not None:
                    mask |= 1 << pos
            masks.append(mask)
        return FiniteGraph(len(chosen), tuple(masks))

    def __repr__(self) -> str:
        return f"FiniteGraph(vertex_count={self.vertex_count}, edges={list(self.edges())})"


@dataclass(frozen=True)
class VertexPartition:
    """
    Assignment of every vertex of a graph to one of ``k`` blocks.

    Attributes:
        block_index: ``block_index[v]`` is the block of vertex ``v``.
        k: Number of available blocks.
    """

    block_index: Tuple[int, ...]
    k: int

    def __post_init__(self) -> None:
        for v, block in enumerate(self.block_index):
            if not 0 <= block < self.k:
                raise ValueError(f"Vertex {v} assigned to block {block} outside [0, {self.k})")

    def blocks(self) -> Dict[int, FrozenSet[int]]:
        grouped: Dict[int, set] = {b: set() for b in range(self.k)}
        for v, block in enumerate(self.block_index):
            grouped[block].add(v)
        return {b: frozenset(members) for b, members in grouped.items()}

    def block_mask(self, block: int) -> int:
        mask = 0
        for v, b in enumerate(self.block_index):
            if b == block:
                mask |= 1 << v
        return mask


def iter_bits(mask: int) -> Iterator[int]:
    """Yield the positions of set bits in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask
