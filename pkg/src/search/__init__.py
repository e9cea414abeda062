"""
Folkman Witness Search

Exhaustive search for vertex-partition witnesses, the Mycielski fallback for
triangle-free targets, and the neighbour-cover obstruction check.
"""
from .folkman import (
    FolkmanCertificate,
    FolkmanSearchExhausted,
    candidate_graphs,
    find_clique_free_partition,
    folkman_witness,
    mycielski_witness,
    mycielski_order,
    mycielskian,
    neighbor_cover_obstruction_check,
    neighbor_sets_clique_free,
    partition_ramsey_check,
    target_witness,
)

__all__ = [
    'FolkmanCertificate',
    'FolkmanSearchExhausted',
    'candidate_graphs',
    'find_clique_free_partition',
    'folkman_witness',
    'mycielski_witness',
    'mycielski_order',
    'mycielskian',
    'neighbor_cover_obstruction_check',
    'neighbor_sets_clique_free',
    'partition_ramsey_check',
    'target_witness',
]
