"""
Finite Graph Algorithms

Clique search, order-isomorphism, prefix restriction, connected orderings and
induced-embedding search over ``FiniteGraph``. All functions are pure.
"""
from collections import deque
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

from .finite_graph import FiniteGraph, iter_bits, mask_of

AdjacencyOracle = Callable[[int, int], bool]


def _popcount(mask: int) -> int:
    return bin(mask).count("1")


def _color_classes(masks: Sequence[int], candidates: int) -> List[Tuple[int, int]]:
    """
    Greedy colouring of ``candidates``.

    Returns ``(vertex, colour)`` pairs with non-decreasing colour; the colour of
    a vertex bounds the size of any clique among it and the vertices before it.
    """
    ordered: List[Tuple[int, int]] = []
    uncolored = candidates
    color = 0
    while uncolored:
        color += 1
        available = uncolored
        while available:
            low = available & -available
            v = low.bit_length() - 1
            available &= ~low & ~masks[v]
            uncolored &= ~low
            ordered.append((v, color))
    return ordered


def _max_clique(masks: Sequence[int], candidates: int, stop_at: Optional[int] = None) -> int:
    best = 0

    def expand(size: int, pool: int) -> bool:
        nonlocal best
        for v, bound in reversed(_color_classes(masks, pool)):
            if size + bound <= best:
                return False
            narrowed = pool & masks[v]
            if narrowed:
                if expand(size + 1, narrowed):
                    return True
            elif size + 1 > best:
                best = size + 1
                if stop_at is not None and best >= stop_at:
                    return True
            pool &= ~(1 << v)
        return False

    if candidates:
        expand(0, candidates)
    return best


def clique_number(g: FiniteGraph) -> int:
    """
    Size of the largest complete subgraph of ``g``; 0 for the empty graph.

    Branch and bound over bitmask candidate sets, pruned by greedy colouring.
    """
    return _max_clique(g.masks, g.full_mask)


def has_clique(g: FiniteGraph, size: int, within: Optional[int] = None) -> bool:
    """True iff the vertices in mask ``within`` (default: all) contain ``K_size``."""
    if size <= 0:
        return True
    pool = g.full_mask if within is None else within & g.full_mask
    if _popcount(pool) < size:
        return False
    if size == 1:
        return True
    if size == 2:
        return any(g.masks[v] & pool for v in iter_bits(pool))
    return _max_clique(g.masks, pool, stop_at=size) >= size


def is_connected(g: FiniteGraph) -> bool:
    if g.vertex_count == 0:
        return False
    seen = 1
    frontier = 1
    while frontier:
        reach = 0
        for v in iter_bits(frontier):
            reach |= g.masks[v]
        frontier = reach & ~seen
        seen |= frontier
    return seen == g.full_mask


def is_connected_kn_free(g: FiniteGraph, n: int) -> bool:
    """Membership in the class of finite connected ``K_n``-free graphs."""
    return is_connected(g) and not has_clique(g, n)


def increasing_iso(
    host_vertices: Sequence[int], host_adjacency: AdjacencyOracle, pattern: FiniteGraph
) -> bool:
    """
    Order-isomorphism test.

    ``host_vertices`` must be sorted ascending and have ``pattern.vertex_count``
    members; the ``i``-th host vertex plays pattern vertex ``i``.
    """
    if len(host_vertices) != pattern.vertex_count:
        return False
    for j in range(1, len(host_vertices)):
        for i in range(j):
            if host_adjacency(host_vertices[i], host_vertices[j]) != pattern.has_edge(i, j):
                return False
    return True


def restriction(g: FiniteGraph, m: int) -> FiniteGraph:
    """Induced subgraph on the first ``m`` vertices."""
    return g.restrict(m)


def connect_order(g: FiniteGraph) -> Tuple[int, ...]:
    """
    Breadth-first order from vertex 0, neighbours taken in ascending order.

    Every vertex after the first is adjacent to an earlier one.

    Raises:
        ValueError: If ``g`` is empty or disconnected.
    """
    if g.vertex_count == 0:
        raise ValueError("connect_order needs a nonempty graph")
    order: List[int] = [0]
    seen = 1
    queue = deque([0])
    while queue:
        v = queue.popleft()
        for u in iter_bits(g.masks[v] & ~seen):
            seen |= 1 << u
            order.append(u)
            queue.append(u)
    if len(order) != g.vertex_count:
        raise ValueError("connect_order needs a connected graph")
    return tuple(order)


def reorder(g: FiniteGraph, order: Sequence[int]) -> FiniteGraph:
    """Relabel ``g`` so that new vertex ``i`` is old vertex ``order[i]``."""
    if sorted(order) != list(range(g.vertex_count)):
        raise ValueError(f"{list(order)} is not a permutation of the vertices")
    return g.induced(order)


def is_connect_ordered(g: FiniteGraph) -> bool:
    """True iff each vertex except 0 has a neighbour with a smaller index."""
    return all(g.masks[v] & ((1 << v) - 1) for v in range(1, g.vertex_count))


def _embedding_order(pattern: FiniteGraph) -> List[int]:
    """Pattern vertices so that each is attached to earlier ones where possible."""
    order: List[int] = []
    placed = 0
    remaining = pattern.full_mask
    while remaining:
        start = max(iter_bits(remaining), key=lambda v: (pattern.degree(v), -v))
        queue = deque([start])
        placed |= 1 << start
        while queue:
            v = queue.popleft()
            order.append(v)
            for u in sorted(iter_bits(pattern.masks[v] & ~placed), key=lambda u: -pattern.degree(u)):
                placed |= 1 << u
                queue.append(u)
        remaining &= ~placed
    return order


def induced_embedding_exists(
    pattern: FiniteGraph, host: FiniteGraph, allowed: Optional[Iterable[int]] = None
) -> bool:
    """
    True iff ``pattern`` is an induced subgraph of ``host`` using only
    vertices from ``allowed`` (default: all host vertices). The map need not
    preserve vertex order.
    """
    if pattern.vertex_count == 0:
        return True
    pool = host.full_mask if allowed is None else mask_of(allowed) & host.full_mask
    if _popcount(pool) < pattern.vertex_count:
        return False

    degree_in_pool = {v: _popcount(host.masks[v] & pool) for v in iter_bits(pool)}
    fits = [
        mask_of(v for v, d in degree_in_pool.items() if d >= pattern.degree(u))
        for u in range(pattern.vertex_count)
    ]
    order = _embedding_order(pattern)
    image = [-1] * pattern.vertex_count

    def extend(pos: int, used: int) -> bool:
        if pos == len(order):
            return True
        u = order[pos]
        candidates = fits[u] & ~used
        for w in order[:pos]:
            if pattern.has_edge(u, w):
                candidates &= host.masks[image[w]]
            else:
                candidates &= ~host.masks[image[w]]
            if not candidates:
                return False
        for v in iter_bits(candidates):
            image[u] = v
            if extend(pos + 1, used | 1 << v):
                return True
        image[u] = -1
        return False

    return extend(0, 0)
