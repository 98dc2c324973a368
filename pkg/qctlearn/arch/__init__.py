from qctlearn.arch.graph import (
    ArchGraph,
    DistanceMatrix,
    Edge,
    build_grid,
    degree_histogram,
    distance_matrix,
    edge_index,
    get_architecture,
    load_bundled,
    load_topology,
)

__all__ = [
    "ArchGraph",
    "DistanceMatrix",
    "Edge",
    "build_grid",
    "degree_histogram",
    "distance_matrix",
    "edge_index",
    "get_architecture",
    "load_bundled",
    "load_topology",
]
