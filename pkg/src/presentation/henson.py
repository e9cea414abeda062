"""
Henson Presentation

A fixed, deterministic, computable copy of the countable homogeneous
``K_n``-free graph on the natural numbers, grown one vertex at a time.

Vertex ``t`` is built from the next set ``A`` of a fair schedule: when every
member of ``A`` exists and ``A`` spans no ``K_{n-1}``, ``t`` is joined to
exactly ``A`` among the earlier vertices; otherwise ``t`` is a filler with no
earlier neighbours. Adjacency between two vertices is fixed when the larger
one is created and never changes afterwards.
"""
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from itertools import combinations, count
from typing import FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

import structlog

from src.graphs import FiniteGraph, has_clique, increasing_iso, is_connected_kn_free

logger = structlog.get_logger(__name__)

BASE_SIZE_CAP = 3
CAP_GROWTH_PERIOD = 64
GROWTH_CHUNK = 256


class PresentationError(ValueError):
    """Raised when an operation's preconditions on the presentation fail."""


@dataclass(frozen=True)
class ExtensionRequirement:
    """
    Demand for a vertex joined to every member of ``A`` and to no member of ``B``.

    Attributes:
        A: Vertices the witness must be adjacent to.
        B: Vertices the witness must avoid.
        satisfied_by: The witness vertex, once one is known.
    """

    A: FrozenSet[int]
    B: FrozenSet[int] = field(default_factory=frozenset)
    satisfied_by: Optional[int] = None

    def __post_init__(self) -> None:
        if self.A & self.B:
            raise PresentationError(
                f"A and B must be disjoint, both contain {sorted(self.A & self.B)}"
            )


class RequirementSchedule:
    """
    Fair enumeration of candidate sets ``A``.

    Level ``L`` lists every subset of ``[0, L)`` with at most
    ``BASE_SIZE_CAP + L // CAP_GROWTH_PERIOD`` members, by size and then
    lexicographically. Each finite set recurs in every level past its maximum.
    """

    def __init__(self) -> None:
        self._items = self._levels()
        self.dequeued = 0
        self.level = 0

    def _levels(self) -> Iterator[Tuple[int, ...]]:
        for level in count():
            self.level = level
            cap = min(level, BASE_SIZE_CAP + level // CAP_GROWTH_PERIOD)
            for size in range(cap + 1):
                yield from combinations(range(level), size)

    def __iter__(self) -> "RequirementSchedule":
        return self

    def __next__(self) -> Tuple[int, ...]:
        self.dequeued += 1
        return next(self._items)


class Presentation:
    """
    Stagewise-built presentation of the Henson graph ``H_n``.

    Args:
        n: Size of the forbidden clique, at least 3.

    Attributes:
        n: Forbidden clique size.
        requirement_queue: The fair schedule feeding new vertices.
    """

    def __init__(self, n: int) -> None:
        if n < 3:
            raise PresentationError(f"n must be at least 3, got {n}")
        self.n = n
        self.requirement_queue = RequirementSchedule()
        self._neighbors: List[List[int]] = []
        self._neighbor_sets: List[Set[int]] = []
        self._joined_to: List[Optional[Tuple[int, ...]]] = []

    @property
    def built_stage(self) -> int:
        """Number of vertices materialised so far."""
        return len(self._neighbors)

    def ensure_stage(self, t: int) -> None:
        """Materialise vertices until at least ``t`` exist."""
        start = self.built_stage
        while self.built_stage < t:
            self._add_vertex()
        if self.built_stage > start:
            logger.debug("presentation_extended", n=self.n, start=start, built=self.built_stage)

    def _add_vertex(self) -> None:
        x = self.built_stage
        candidate = next(self.requirement_queue)
        joined: Optional[Tuple[int, ...]] = candidate
        if candidate and (candidate[-1] >= x or self.spans_forbidden_clique(candidate)):
            joined = None

        self._neighbors.append(list(joined or ()))
        self._neighbor_sets.append(set(joined or ()))
        self._joined_to.append(joined)
        for a in joined or ():
            self._neighbors[a].append(x)
            self._neighbor_sets[a].add(x)

    def spans_forbidden_clique(self, vertices: Sequence[int]) -> bool:
        """True iff ``vertices`` contain a ``K_{n-1}``, so no extension is promised over them."""
        if len(vertices) < self.n - 1:
            return False
        return has_clique(self.induced(vertices), self.n - 1)

    def adjacent(self, i: int, j: int) -> bool:
        """Adjacency of ``i`` and ``j``; extends the presentation as needed."""
        if i == j:
            return False
        self.ensure_stage(max(i, j) + 1)
        return j in self._neighbor_sets[i]

    def neighbor_set_within(self, x: int, m: int) -> List[int]:
        """Sorted neighbours of ``x`` below ``m``."""
        self.ensure_stage(max(m, x + 1))
        neighbors = self._neighbors[x]
        return neighbors[:bisect_left(neighbors, m)]

    def neighbors_above(self, x: int, bound: int) -> Iterator[int]:
        """
        Neighbours of ``x`` greater than ``bound`` in ascending order.

        The iterator grows the presentation on demand and never ends.
        """
        self.ensure_stage(x + 1)
        neighbors = self._neighbors[x]
        position = bisect_right(neighbors, bound)
        while True:
            while position < len(neighbors):
                yield neighbors[position]
                position += 1
            self.ensure_stage(self.built_stage + GROWTH_CHUNK)

    def neighbor_count(self, x: int) -> int:
        """Neighbours of ``x`` among the vertices built so far."""
        self.ensure_stage(x + 1)
        return len(self._neighbors[x])

    def restriction(self, m: int) -> FiniteGraph:
        """The induced subgraph on ``[0, m)`` as a ``FiniteGraph``."""
        self.ensure_stage(m)
        masks = []
        for v in range(m):
            mask = 0
            for u in self.neighbor_set_within(v, m):
                mask |= 1 << u
            masks.append(mask)
        return FiniteGraph(m, tuple(masks))

    def induced(self, vertices: Sequence[int]) -> FiniteGraph:
        """The induced subgraph on ``vertices`` relabelled by position."""
        masks = []
        for i, v in enumerate(vertices):
            mask = 0
            for j, u in enumerate(vertices):
                if self.adjacent(v, u):
                    mask |= 1 << j
            masks.append(mask)
        return FiniteGraph(len(vertices), tuple(masks))

    def requirement_served(self, x: int) -> Optional[ExtensionRequirement]:
        """
        The extension requirement vertex ``x`` was built to satisfy, or
        ``None`` for a filler. ``B`` is every earlier vertex outside ``A``.
        """
        self.ensure_stage(x + 1)
        joined = self._joined_to[x]
        if joined is None:
            return None
        return ExtensionRequirement(
            A=frozenset(joined),
            B=frozenset(range(x)) - frozenset(joined),
            satisfied_by=x,
        )

    def witness_log(self, limit: Optional[int] = None) -> Iterator[ExtensionRequirement]:
        """Requirements satisfied by the first ``limit`` vertices (default: all built)."""
        end = self.built_stage if limit is None else limit
        for x in range(end):
            served = self.requirement_served(x)
            if served is not None:
                yield served

    def __repr__(self) -> str:
        return f"Presentation(n={self.n}, built_stage={self.built_stage})"


def new_presentation(n: int) -> Presentation:
    """Empty presentation of ``H_n``; identical for equal ``n``."""
    return Presentation(n)


def _candidates_above(p: Presentation, A: Sequence[int], bound: int) -> Iterator[int]:
    if A:
        # Scan the neighbour list of the member of A with the fewest neighbours.
        anchor = min(A, key=lambda a: (p.neighbor_count(a), a))
        return p.neighbors_above(anchor, bound)
    return count(max(bound + 1, 0))


def find_extension(
    p: Presentation,
    A: Iterable[int],
    B: Iterable[int],
    bound: int,
    limit: Optional[int] = None,
) -> int:
    """
    Least vertex ``x > bound`` outside ``A ∪ B`` adjacent to all of ``A``
    and to none of ``B``.

    Args:
        p: The presentation.
        A: Vertices to connect to; must span no ``K_{n-1}``.
        B: Vertices to avoid; disjoint from ``A``.
        bound: Witnesses must exceed this vertex.
        limit: Give up once candidates reach this vertex.

    Raises:
        PresentationError: If ``A`` and ``B`` meet, ``A`` spans ``K_{n-1}``,
            or ``limit`` is reached.
    """
    requirement = ExtensionRequirement(A=frozenset(A), B=frozenset(B))
    members = sorted(requirement.A)
    if p.spans_forbidden_clique(members):
        raise PresentationError(
            f"A={members} contains K_{p.n - 1}; the extension property does not apply"
        )

    excluded = requirement.A | requirement.B
    for x in _candidates_above(p, members, bound):
        if limit is not None and x >= limit:
            raise PresentationError(
                f"No extension for A={members}, B={sorted(requirement.B)} below {limit}"
            )
        if x in excluded:
            continue
        if all(p.adjacent(x, a) for a in members) and not any(
            p.adjacent(x, b) for b in requirement.B
        ):
            return x
    raise AssertionError("unreachable")


def extend_copy(
    p: Presentation,
    Delta: Sequence[int],
    Gamma: FiniteGraph,
    bound: int,
    limit: Optional[int] = None,
) -> int:
    """
    Least ``x > bound`` with ``x > max(Delta)`` such that ``Delta + [x]`` is
    order-isomorphic to ``Gamma``.

    Raises:
        PresentationError: If ``Delta`` is not strictly increasing, ``Gamma``
            is not a connected ``K_n``-free graph on ``len(Delta) + 1``
            vertices, or ``Delta`` is not order-isomorphic to ``Gamma``
            without its last vertex.
    """
    d = len(Delta)
    if any(Delta[i] >= Delta[i + 1] for i in range(d - 1)):
        raise PresentationError(f"Delta must be strictly increasing, got {list(Delta)}")
    if Gamma.vertex_count != d + 1:
        raise PresentationError(
            f"Gamma must have {d + 1} vertices for |Delta| = {d}, got {Gamma.vertex_count}"
        )
    if not is_connected_kn_free(Gamma, p.n):
        raise PresentationError(f"Gamma must be connected and K_{p.n}-free")
    if not increasing_iso(Delta, p.adjacent, Gamma.restrict(d)):
        raise PresentationError(f"Delta={list(Delta)} is not order-isomorphic to Gamma's prefix")

    A = [Delta[i] for i in range(d) if Gamma.has_edge(i, d)]
    B = [Delta[i] for i in range(d) if not Gamma.has_edge(i, d)]
    floor = max(bound, Delta[-1] if Delta else bound)
    return find_extension(p, A, B, floor, limit=limit)
