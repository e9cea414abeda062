"""
Unit tests for the witness search, the Mycielski fallback and the
neighbour-cover checks.
"""
import random
from itertools import product

import pytest

from src.graphs import FiniteGraph, clique_number, encode_graph6, has_clique, is_connected, mask_of
from src.search import (
    FolkmanSearchExhausted,
    candidate_graphs,
    find_clique_free_partition,
    folkman_witness,
    mycielski_order,
    mycielski_witness,
    mycielskian,
    neighbor_cover_obstruction_check,
    neighbor_sets_clique_free,
    partition_ramsey_check,
    target_witness,
)


def _naive_ramsey(g: FiniteGraph, n: int, k: int) -> bool:
    """Every k-partition has a block containing K_{n-1}, by full enumeration."""
    for assignment in product(range(k), repeat=g.vertex_count):
        blocks = [mask_of(v for v, b in enumerate(assignment) if b == block) for block in range(k)]
        if not any(has_clique(g, n - 1, within=mask) for mask in blocks):
            return False
    return True


def test_candidate_graphs_order():
    graphs = list(candidate_graphs(3))
    assert len(graphs) == 8
    assert graphs[0] == FiniteGraph.empty(3)
    assert graphs[-1] == FiniteGraph.complete(3)
    assert [encode_graph6(g) for g in graphs[:2]] == ["B?", "BG"]


def test_single_block_witness():
    certificate = folkman_witness(3, 1, 5)
    assert certificate.graph == FiniteGraph.complete(2)
    assert certificate.candidates_examined == 3
    assert certificate.method == "search"


def test_two_block_witness_is_five_cycle():
    """Test that the first 2-partition witness for triangles is C_5."""
    certificate = folkman_witness(3, 2, 6)
    g = certificate.graph
    assert g.vertex_count == 5
    assert g.edge_count() == 5
    assert all(g.degree(v) == 2 for v in range(5))
    assert is_connected(g)
    summary = certificate.summary()
    assert summary["vertices"] == 5
    assert summary["graph6"] == encode_graph6(g)


def test_search_exhaustion():
    with pytest.raises(FolkmanSearchExhausted) as exc_info:
        folkman_witness(3, 2, 4)
    assert exc_info.value.max_vertices == 4
    assert exc_info.value.candidates_examined == 1 + 2 + 8 + 64


def test_k4_free_single_block_is_triangle():
    assert folkman_witness(4, 1, 4).graph == FiniteGraph.complete(3)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        folkman_witness(2, 1, 4)
    with pytest.raises(ValueError):
        folkman_witness(3, 0, 4)


@pytest.mark.parametrize("vertex_count", range(1, 6))
@pytest.mark.parametrize("n, k", [(3, 1), (3, 2), (4, 2), (3, 3)])
def test_partition_check_matches_enumeration_on_all_small_graphs(vertex_count, n, k):
    """Test the pruned partition check on every graph with at most five vertices."""
    for g in candidate_graphs(vertex_count):
        assert partition_ramsey_check(g, n, k) == _naive_ramsey(g, n, k), encode_graph6(g)


@pytest.mark.parametrize("seed", range(10))
@pytest.mark.parametrize("n, k", [(3, 2), (4, 2), (3, 3)])
def test_partition_check_matches_enumeration(seed, n, k):
    rng = random.Random(seed * 7 + n + k)
    vertex_count = rng.randint(6, 7)
    edges = [(i, j) for j in range(vertex_count) for i in range(j) if rng.random() < 0.55]
    g = FiniteGraph.from_edges(vertex_count, edges)
    assert partition_ramsey_check(g, n, k) == _naive_ramsey(g, n, k)


def test_clique_free_partition_is_valid():
    partition = find_clique_free_partition(FiniteGraph.cycle(6), 3, 2)
    assert partition is not None
    for block in partition.blocks().values():
        assert not has_clique(FiniteGraph.cycle(6), 2, within=mask_of(block))
    assert find_clique_free_partition(FiniteGraph.cycle(5), 3, 2) is None


def test_mycielski_construction():
    """Test the Mycielski graphs: orders, triangle-freeness and partitions."""
    assert mycielskian(FiniteGraph.complete(2)).vertex_count == 5
    for k in range(1, 6):
        assert mycielski_witness(k).graph.vertex_count == mycielski_order(k)
    grotzsch = mycielski_witness(3).graph
    assert grotzsch.edge_count() == 20
    assert clique_number(grotzsch) == 2
    assert is_connected(grotzsch)
    assert partition_ramsey_check(grotzsch, 3, 3)
    assert find_clique_free_partition(grotzsch, 3, 4) is not None


def test_target_witness_selection():
    assert target_witness(3, 2, 6).method == "search"
    fallback = target_witness(3, 3, 6)
    assert fallback.method == "mycielski"
    assert fallback.graph.vertex_count == 11
    assert fallback.summary()["method"] == "mycielski"
    with pytest.raises(FolkmanSearchExhausted):
        target_witness(3, 4, 6, construction_cap=20)


def test_neighbor_cover_obstruction(presentation3):
    """Test witnesses against unions of independent neighbour sets."""
    c5 = folkman_witness(3, 2, 6).graph
    assert neighbor_cover_obstruction_check(c5, presentation3, [0, 1], 100)
    assert neighbor_cover_obstruction_check(FiniteGraph.complete(2), presentation3, [0], 100)
    # 13 is joined to 1 and 2, and 2 is a neighbour of 0.
    assert not neighbor_cover_obstruction_check(FiniteGraph.complete(2), presentation3, [0, 1], 100)
    assert neighbor_sets_clique_free(presentation3, list(range(50)), 100)


@pytest.mark.parametrize(
    "n, k, max_vertices",
    [(3, 1, 5), (3, 2, 6), (4, 1, 4)],
)
def test_witness_clique_number_and_fewer_blocks(n, k, max_vertices):
    """Test that a witness has clique number n - 1 and also defeats fewer blocks."""
    g = folkman_witness(n, k, max_vertices).graph
    assert clique_number(g) == n - 1
    assert is_connected(g)
    for fewer in range(1, k + 1):
        assert partition_ramsey_check(g, n, fewer)
        assert _naive_ramsey(g, n, fewer)


def test_mycielski_witness_defeats_fewer_blocks():
    for k in range(1, 4):
        certificate = mycielski_witness(k)
        assert clique_number(certificate.graph) == 2
        for fewer in range(1, k + 1):
            assert partition_ramsey_check(certificate.graph, 3, fewer)


def test_witness_size_grows_with_blocks():
    sizes = [folkman_witness(3, k, 6).graph.vertex_count for k in (1, 2)]
    assert sizes == sorted(sizes)
