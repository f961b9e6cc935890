"""Graphs, k-partition enumeration, cut subgraphs, matchings and the reduction term."""

from .graph import (
    Edge,
    Graph,
    GraphError,
    chain,
    complete,
    cthulhu,
    graph_from_json,
    lattice2d,
    local_complement,
    make_family,
    ring,
    star,
    tree,
)
from .matching import matching_from_edges, max_cardinality_matching
from .partitions import (
    PartitionError,
    PartitionLabeling,
    iter_k_partitions,
    next_k_partition,
    stirling2,
)
from .reduction import (
    CutSubgraph,
    EnumerationCapExceeded,
    ParetoCutProfile,
    as_fraction,
    collect_profile,
    cut_subgraph,
    enumeration_cap,
    fixed_partition_stats,
    reduction_term,
)

__all__ = [
    "CutSubgraph",
    "Edge",
    "EnumerationCapExceeded",
    "Graph",
    "GraphError",
    "ParetoCutProfile",
    "PartitionError",
    "PartitionLabeling",
    "as_fraction",
    "chain",
    "collect_profile",
    "complete",
    "cthulhu",
    "cut_subgraph",
    "enumeration_cap",
    "fixed_partition_stats",
    "graph_from_json",
    "iter_k_partitions",
    "lattice2d",
    "local_complement",
    "make_family",
    "matching_from_edges",
    "max_cardinality_matching",
    "next_k_partition",
    "reduction_term",
    "ring",
    "star",
    "stirling2",
    "tree",
]
