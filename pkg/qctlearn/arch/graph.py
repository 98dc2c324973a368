import hashlib
import json
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
import numpy as np
from pydantic import ValidationError

from qctlearn.exceptions import ArchitectureError, NonEdgeError
from qctlearn.models import TopologySpec
from qctlearn.utils.logging import get_logger

logger = get_logger("Arch")

Edge = Tuple[int, int]

BUNDLED = ("tokyo", "guadalupe", "sycamore")


class DistanceMatrix:
    """
    All-pairs hop counts of an architecture graph.

    `matrix` is a read-only numpy array; `rows` is the same data as nested
    lists for fast scalar lookups in the routers' inner loops.
    """
    __slots__ = ("matrix", "rows")

    def __init__(self, matrix: np.ndarray):
        matrix = np.asarray(matrix, dtype=np.int64)
        matrix.setflags(write=False)
        self.matrix = matrix
        self.rows: List[List[int]] = matrix.tolist()

    def __getitem__(self, uv: Tuple[int, int]) -> int:
        u, v = uv
        return self.rows[u][v]

    def __len__(self) -> int:
        return len(self.rows)


class ArchGraph:
    """
    Undirected, connected coupling graph of a device.

    Edges are stored canonically, ``(min, max)`` sorted lexicographically;
    that order is the coordinate system of every recommendation distribution
    and policy model output.
    """

    def __init__(self, num_nodes: int, edges: Iterable[Sequence[int]], name: str = "custom"):
        if num_nodes < 1:
            raise ArchitectureError("an architecture graph needs at least one node")
        canonical = set()
        for e in edges:
            u, v = int(e[0]), int(e[1])
            if u == v:
                raise ArchitectureError(f"self-loop on node {u}")
            if not (0 <= u < num_nodes and 0 <= v < num_nodes):
                raise ArchitectureError(f"edge ({u},{v}) references a node outside [0,{num_nodes})")
            key = (min(u, v), max(u, v))
            if key in canonical:
                raise ArchitectureError(f"duplicate edge {key}")
            canonical.add(key)

        self.name = name
        self.num_nodes = num_nodes
        self.edges: Tuple[Edge, ...] = tuple(sorted(canonical))
        self._index: Dict[Edge, int] = {e: i for i, e in enumerate(self.edges)}

        g = nx.Graph()
        g.add_nodes_from(range(num_nodes))
        g.add_edges_from(self.edges)
        if num_nodes > 1 and not nx.is_connected(g):
            raise ArchitectureError(f"architecture graph {name!r} is disconnected")
        self._nx = g
        self.neighbors: Tuple[Tuple[int, ...], ...] = tuple(
            tuple(sorted(g.neighbors(v))) for v in range(num_nodes)
        )
        self.distance = distance_matrix(self)
        self.edge_sha = hashlib.sha256(json.dumps([list(e) for e in self.edges]).encode()).hexdigest()

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def to_networkx(self) -> nx.Graph:
        return self._nx.copy()

    def is_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._index

    def edge_index(self, u: int, v: int) -> int:
        return edge_index(self, u, v)

    def shortest_path(self, u: int, v: int) -> List[int]:
        """Node path from u to v; at each hop the lowest-numbered closer neighbor."""
        rows = self.distance.rows
        path = [u]
        while path[-1] != v:
            here = path[-1]
            path.append(next(n for n in self.neighbors[here] if rows[n][v] == rows[here][v] - 1))
        return path

    def to_spec(self) -> TopologySpec:
        return TopologySpec(name=self.name, num_nodes=self.num_nodes, edges=list(self.edges))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArchGraph):
            return NotImplemented
        return self.num_nodes == other.num_nodes and self.edges == other.edges

    def __hash__(self) -> int:
        return hash((self.num_nodes, self.edges))

    def __getstate__(self) -> dict:
        return {"name": self.name, "num_nodes": self.num_nodes, "edges": self.edges}

    def __setstate__(self, state: dict) -> None:
        self.__init__(state["num_nodes"], state["edges"], state["name"])  # type: ignore[misc]

    def __repr__(self) -> str:
        return f"ArchGraph(name={self.name!r}, nodes={self.num_nodes}, edges={self.num_edges})"


def distance_matrix(g: ArchGraph) -> DistanceMatrix:
    """BFS hop counts between every pair of nodes."""
    n = g.num_nodes
    matrix = np.zeros((n, n), dtype=np.int64)
    for src, lengths in nx.all_pairs_shortest_path_length(g._nx):
        for dst, d in lengths.items():
            matrix[src, dst] = d
    return DistanceMatrix(matrix)


def edge_index(g: ArchGraph, u: int, v: int) -> int:
    """Position of the undirected edge (u, v) in the canonical order."""
    try:
        return g._index[(min(u, v), max(u, v))]
    except KeyError:
        raise NonEdgeError(f"({u},{v}) is not an edge of {g.name}") from None


def build_grid(rows: int, cols: int) -> ArchGraph:
    """
    Grid architecture with column-major numbering: node ``rows*c + r`` sits
    at column c, row r. On a 2x3 grid this makes (1,3) and (3,5) edges and
    puts nodes 1 and 5 two hops apart.
    """
    if rows < 1 or cols < 1:
        raise ArchitectureError(f"grid dimensions must be positive, got {rows}x{cols}")
    edges: List[Edge] = []
    for c in range(cols):
        for r in range(rows):
            v = rows * c + r
            if r + 1 < rows:
                edges.append((v, v + 1))
            if c + 1 < cols:
                edges.append((v, v + rows))
    return ArchGraph(rows * cols, edges, name=f"grid{rows}x{cols}")


def load_topology(path: Union[str, Path]) -> ArchGraph:
    """Reads and validates a topology JSON file."""
    try:
        spec = TopologySpec.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except (ValidationError, json.JSONDecodeError) as e:
        raise ArchitectureError(f"malformed topology file {path}: {e}") from e
    graph = ArchGraph(spec.num_nodes, spec.edges, name=spec.name)
    logger.debug(f"Loaded topology {graph!r} from {path}")
    return graph


def load_bundled(name: str) -> ArchGraph:
    """One of the shipped device graphs: tokyo, guadalupe or sycamore."""
    key = name.lower()
    if key not in BUNDLED:
        raise ArchitectureError(f"unknown bundled topology {name!r}; choose from {', '.join(BUNDLED)}")
    ref = resources.files("qctlearn.arch").joinpath("data", f"{key}.json")
    with resources.as_file(ref) as p:
        return load_topology(p)


def get_architecture(spec: str) -> ArchGraph:
    """
    Resolves ``grid:RxC`` (or ``gridRxC``), a bundled device name, or a
    path to a topology JSON file.
    """
    s = spec.strip()
    low = s.lower()
    if low.startswith("grid"):
        dims = low[4:].lstrip(":")
        try:
            r, c = (int(x) for x in dims.split("x"))
        except ValueError:
            raise ArchitectureError(f"bad grid spec {spec!r}; expected grid:RxC") from None
        return build_grid(r, c)
    if low in BUNDLED:
        return load_bundled(low)
    if Path(s).exists():
        return load_topology(s)
    raise ArchitectureError(f"cannot resolve architecture {spec!r}")


def degree_histogram(g: ArchGraph) -> Dict[int, int]:
    hist: Dict[int, int] = {}
    for nbrs in g.neighbors:
        hist[len(nbrs)] = hist.get(len(nbrs), 0) + 1
    return dict(sorted(hist.items()))
