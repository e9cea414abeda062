"""
Finite Graph Kernel

Immutable simple graphs, clique and embedding searches, and the graph6 codec.
"""
from .finite_graph import FiniteGraph, VertexPartition, iter_bits, mask_of
from .algorithms import (
    clique_number,
    connect_order,
    has_clique,
    increasing_iso,
    induced_embedding_exists,
    is_connect_ordered,
    is_connected,
    is_connected_kn_free,
    reorder,
    restriction,
)
from .graph6 import (
    Graph6DecodeError,
    decode_graph6,
    encode_graph6,
    read_graph6_lines,
    write_graph6_lines,
)

__all__ = [
    'FiniteGraph',
    'VertexPartition',
    'iter_bits',
    'mask_of',
    'clique_number',
    'connect_order',
    'has_clique',
    'increasing_iso',
    'induced_embedding_exists',
    'is_connect_ordered',
    'is_connected',
    'is_connected_kn_free',
    'reorder',
    'restriction',
    'Graph6DecodeError',
    'decode_graph6',
    'encode_graph6',
    'read_graph6_lines',
    'write_graph6_lines',
]
