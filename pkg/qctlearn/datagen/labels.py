"""
Label generators: recommendation distributions over the architecture's
edges for one training circuit, produced by a feeding router.
"""
from dataclasses import replace
from typing import Callable, Optional, Sequence

import numpy as np

from qctlearn.arch.graph import ArchGraph
from qctlearn.circuit.ir import Circuit
from qctlearn.exceptions import CircuitError
from qctlearn.models import LabelerSpec
from qctlearn.routing.baseline import base_route
from qctlearn.routing.core import RoutingResult, split_executable
from qctlearn.routing.mapping import Mapping
from qctlearn.routing.mcts import MctsParams, MctsSearch
from qctlearn.routing.sahs import SahsParams, sahs_route

Completion = Callable[[Circuit, ArchGraph, Mapping], RoutingResult]


def normalize_weights(w: Sequence[float]) -> np.ndarray:
    """p(e) proportional to 1 / (w(e) + 1)."""
    inv = 1.0 / (np.asarray(w, dtype=np.float64) + 1.0)
    return inv / inv.sum()


def uniform(g: ArchGraph) -> np.ndarray:
    return np.full(g.num_edges, 1.0 / g.num_edges)


def _check_fits(c: Circuit, g: ArchGraph) -> None:
    if c.num_qubits > g.num_nodes:
        raise CircuitError(f"circuit uses {c.num_qubits} qubits but {g.name} has {g.num_nodes}")


def completion_weights(c: Circuit, g: ArchGraph, complete: Completion) -> np.ndarray:
    """
    w(e) for every edge: the swaps `complete` inserts after e has been applied
    to the naive mapping and the gates it enables have run. e itself is not
    counted.
    """
    _check_fits(c, g)
    naive = Mapping.naive(g.num_nodes)
    rows = g.distance.rows
    w = np.zeros(g.num_edges)
    for i, (u, v) in enumerate(g.edges):
        m = naive.swapped(u, v)
        _, remaining = split_executable(c.gates, m.l2p, rows)
        if remaining:
            w[i] = complete(Circuit(c.num_qubits, tuple(remaining)), g, m).swap_count
    return w


def label_sahs(c: Circuit, g: ArchGraph, d: int = 2, params: Optional[SahsParams] = None) -> np.ndarray:
    p = replace(params or SahsParams.from_settings(), depth=d)
    return normalize_weights(completion_weights(c, g, lambda rc, gg, m: sahs_route(rc, gg, m, p)))


def label_base(c: Circuit, g: ArchGraph) -> np.ndarray:
    return normalize_weights(completion_weights(c, g, base_route))


def label_mcts(
    c: Circuit, g: ArchGraph, n_bp: int = 200, seed: int = 0, params: Optional[MctsParams] = None
) -> np.ndarray:
    """
    Root-child visit counts after `n_bp` iterations from the naive mapping
    (executable gates removed first), normalized. Uniform when nothing is
    left to route.
    """
    p = replace(params or MctsParams.from_settings(labeling=True), n_bp=n_bp, seed=seed)
    _check_fits(c, g)
    naive = Mapping.naive(g.num_nodes)
    _, remaining = split_executable(c.gates, naive.l2p, g.distance.rows)
    if not remaining:
        return uniform(g)
    search = MctsSearch(g, p)
    search.reset(naive, remaining)
    search.run()
    visits = search.child_visits()
    return visits / visits.sum()


def label_circuit(c: Circuit, g: ArchGraph, spec: LabelerSpec, seed: int = 0) -> np.ndarray:
    """Dispatches on ``spec.kind``; only the MCTS labeler consumes `seed`."""
    if spec.kind == "sahs":
        return label_sahs(c, g, spec.depth)
    if spec.kind == "base":
        return label_base(c, g)
    params = MctsParams.from_settings(n_bp=spec.n_bp, seed=seed, sim_depth=spec.sim_depth, labeling=True)
    return label_mcts(c, g, spec.n_bp, seed, params)
