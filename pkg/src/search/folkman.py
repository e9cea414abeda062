"""
Folkman Witness Search

Brute-force search for connected ``K_n``-free graphs in which every
``k``-partition of the vertices leaves ``K_{n-1}`` inside one block, and a
finite-window check that such graphs do not fit inside a union of
neighbour sets of the presentation.
"""
from dataclasses import dataclass
from itertools import product
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

import structlog

from src.graphs import (
    FiniteGraph,
    VertexPartition,
    encode_graph6,
    has_clique,
    induced_embedding_exists,
    is_connected,
    mask_of,
)
from src.presentation import Presentation

logger = structlog.get_logger(__name__)


class FolkmanSearchExhausted(RuntimeError):
    """No witness exists on at most ``max_vertices`` vertices."""

    def __init__(self, n: int, k: int, max_vertices: int, candidates_examined: int) -> None:
        super().__init__(
            f"No witness for n={n}, k={k} on at most {max_vertices} vertices "
            f"({candidates_examined} candidate graphs examined)"
        )
        self.n = n
        self.k = k
        self.max_vertices = max_vertices
        self.candidates_examined = candidates_examined


@dataclass(frozen=True)
class FolkmanCertificate:
    """
    A graph in which every ``k``-partition has a block containing ``K_{n-1}``.

    Attributes:
        graph: The witness, connected and ``K_n``-free.
        n: Forbidden clique size.
        k: Number of blocks defeated.
        partitions_checked: Branches closed by the partition search on the witness.
        candidates_examined: Graphs enumerated before the witness, inclusive.
        method: ``"search"`` for the enumeration, ``"mycielski"`` for the
            iterated Mycielski construction.
    """

    graph: FiniteGraph
    n: int
    k: int
    partitions_checked: int
    candidates_examined: int
    method: str = "search"

    def summary(self) -> Dict[str, Any]:
        return {
            "n": self.n,
            "k": self.k,
            "vertices": self.graph.vertex_count,
            "edges": self.graph.edge_count(),
            "graph6": encode_graph6(self.graph),
            "partitions_checked": self.partitions_checked,
            "candidates_examined": self.candidates_examined,
            "method": self.method,
        }


def _validate(n: int, k: int) -> None:
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if k < 1:
        raise ValueError(f"k must be at least 1, got {k}")


def _search_partition(g: FiniteGraph, n: int, k: int) -> Tuple[Optional[Tuple[int, ...]], int]:
    """
    Look for a ``k``-partition with no block containing ``K_{n-1}``.

    Vertex 0 is fixed to block 0. A branch is cut as soon as the vertex just
    placed completes ``K_{n-1}`` inside its block.

    Returns:
        The partition found (or ``None``) and the number of branches closed.
    """
    blocks = [0] * k
    assignment = [0] * g.vertex_count
    closed = 0

    def place(v: int) -> bool:
        nonlocal closed
        if v == g.vertex_count:
            closed += 1
            return True
        for block in range(1 if v == 0 else k):
            if has_clique(g, n - 2, within=g.masks[v] & blocks[block]):
                closed += 1
                continue
            blocks[block] |= 1 << v
            assignment[v] = block
            if place(v + 1):
                return True
            blocks[block] &= ~(1 << v)
        return False

    if place(0):
        return tuple(assignment), closed
    return None, closed


def find_clique_free_partition(g: FiniteGraph, n: int, k: int) -> Optional[VertexPartition]:
    """A ``k``-partition of ``g`` with no block containing ``K_{n-1}``, if any."""
    _validate(n, k)
    assignment, _ = _search_partition(g, n, k)
    return None if assignment is None else VertexPartition(assignment, k)


def partition_ramsey_check(g: FiniteGraph, n: int, k: int) -> bool:
    """True iff every ``k``-partition of ``g`` has a block containing ``K_{n-1}``."""
    _validate(n, k)
    assignment, _ = _search_partition(g, n, k)
    return assignment is None


def candidate_graphs(vertex_count: int) -> Iterator[FiniteGraph]:
    """
    All graphs on ``vertex_count`` vertices, ordered by their adjacency
    bitstring in graph6 pair order, starting from the empty graph.
    """
    pairs = [(i, j) for j in range(1, vertex_count) for i in range(j)]
    for bits in product((0, 1), repeat=len(pairs)):
        masks = [0] * vertex_count
        for (i, j), bit in zip(pairs, bits):
            if bit:
                masks[i] |= 1 << j
                masks[j] |= 1 << i
        yield FiniteGraph(vertex_count, tuple(masks))


_WITNESS_CACHE: Dict[Tuple[int, int], FolkmanCertificate] = {}
_MYCIELSKI_CACHE: Dict[int, FolkmanCertificate] = {}
MYCIELSKI_VERTEX_CAP = 6143


def folkman_witness(n: int, k: int, max_vertices: int) -> FolkmanCertificate:
    """
    First connected ``K_n``-free graph, by vertex count and then bitstring
    order, whose every ``k``-partition has a block containing ``K_{n-1}``.

    Raises:
        FolkmanSearchExhausted: If no graph on at most ``max_vertices``
            vertices qualifies.
    """
    _validate(n, k)
    cached = _WITNESS_CACHE.get((n, k))
    if cached is not None:
        if cached.graph.vertex_count <= max_vertices:
            return cached
        examined = sum(2 ** (v * (v - 1) // 2) for v in range(1, max_vertices + 1))
        raise FolkmanSearchExhausted(n, k, max_vertices, examined)

    examined = 0
    for vertex_count in range(1, max_vertices + 1):
        for g in candidate_graphs(vertex_count):
            examined += 1
            if not is_connected(g) or has_clique(g, n):
                continue
            assignment, closed = _search_partition(g, n, k)
            if assignment is None:
                certificate = FolkmanCertificate(g, n, k, closed, examined)
                _WITNESS_CACHE[(n, k)] = certificate
                logger.info(
                    "folkman_witness_found",
                    n=n,
                    k=k,
                    vertices=vertex_count,
                    graph6=encode_graph6(g),
                    candidates_examined=examined,
                )
                return certificate
        logger.debug("folkman_size_exhausted", n=n, k=k, vertices=vertex_count, examined=examined)

    logger.warning("folkman_search_exhausted", n=n, k=k, max_vertices=max_vertices)
    raise FolkmanSearchExhausted(n, k, max_vertices, examined)


def mycielskian(g: FiniteGraph) -> FiniteGraph:
    """
    Mycielski construction: vertices ``0..m-1`` are ``g``, ``m + i`` is a
    shadow of ``i`` joined to the neighbours of ``i``, and ``2m`` is joined to
    every shadow. Preserves triangle-freeness and raises the chromatic number
    by one.
    """
    m = g.vertex_count
    edges = list(g.edges())
    for i in range(m):
        edges.extend((u, m + i) for u in g.neighbors(i))
        edges.append((m + i, 2 * m))
    return FiniteGraph.from_edges(2 * m + 1, edges)


def mycielski_witness(k: int) -> FolkmanCertificate:
    """
    Triangle-free witness for ``n = 3`` defeating every ``k``-partition:
    ``K_2`` with ``k - 1`` Mycielski steps applied, chromatic number ``k + 1``.
    """
    _validate(3, k)
    g = FiniteGraph.complete(2)
    for _ in range(k - 1):
        g = mycielskian(g)
    return FolkmanCertificate(g, 3, k, 0, 0, method="mycielski")


def mycielski_order(k: int) -> int:
    """Vertex count of the Mycielski witness defeating ``k`` blocks."""
    return 3 * 2 ** (k - 1) - 1


def target_witness(
    n: int, k: int, max_vertices: int, construction_cap: int = MYCIELSKI_VERTEX_CAP
) -> FolkmanCertificate:
    """
    Witness used for target graphs.

    Enumerates with ``folkman_witness`` where that is feasible. For ``n = 3``
    and ``k >= 3`` the enumeration cannot reach the smallest witness, so the
    Mycielski graph is returned instead.

    Raises:
        FolkmanSearchExhausted: For ``n >= 4`` when the enumeration fails
            within ``max_vertices``, or when the Mycielski witness would
            exceed ``construction_cap`` vertices.
    """
    _validate(n, k)
    if n == 3 and k >= 3:
        if mycielski_order(k) > construction_cap:
            logger.warning("mycielski_cap_exceeded", k=k, cap=construction_cap)
            raise FolkmanSearchExhausted(n, k, construction_cap, 0)
        cached = _MYCIELSKI_CACHE.get(k)
        if cached is None:
            cached = mycielski_witness(k)
            _MYCIELSKI_CACHE[k] = cached
            logger.info(
                "mycielski_witness_built",
                k=k,
                vertices=cached.graph.vertex_count,
                edges=cached.graph.edge_count(),
            )
        return cached
    return folkman_witness(n, k, max_vertices)


def _cover(p: Presentation, centers: Sequence[int], window: int) -> List[int]:
    covered = set()
    for center in centers:
        covered.update(p.neighbor_set_within(center, window))
    return sorted(covered)


def neighbor_cover_obstruction_check(
    g: FiniteGraph, p: Presentation, centers: Sequence[int], window: int
) -> bool:
    """
    True iff ``g`` has no induced embedding into the union of the neighbour
    sets of ``centers`` restricted to ``[0, window)``.

    Passing over a finite window is evidence, not proof.
    """
    host = p.restriction(window)
    return not induced_embedding_exists(g, host, _cover(p, centers, window))


def neighbor_sets_clique_free(p: Presentation, centers: Sequence[int], window: int) -> bool:
    """True iff no neighbour set of ``centers`` within the window contains ``K_{n-1}``."""
    host = p.restriction(window)
    return not any(
        has_clique(host, p.n - 1, within=mask_of(p.neighbor_set_within(center, window)))
        for center in centers
    )
