"""
Greedy routers: BASE, ANN-QCT and BASE-ANN.

BASE evaluates every edge swap against the front-layer cost and commits the
first strict minimum in canonical edge order. ANN-QCT commits the policy
model's argmax. BASE-ANN is BASE with ties broken by the model.
"""
from typing import TYPE_CHECKING, List, Optional

import numpy as np

from qctlearn.arch.graph import ArchGraph, Edge
from qctlearn.circuit.ir import Circuit
from qctlearn.routing.core import RoutingResult, RoutingSession, front_gates, swap_costs
from qctlearn.routing.mapping import Mapping
from qctlearn.utils.logging import get_logger

if TYPE_CHECKING:
    from qctlearn.policy.network import PolicyModel

logger = get_logger("Baseline")


def minimal_swaps(session: RoutingSession) -> List[int]:
    """Edge indices attaining the minimal post-swap front-layer cost, canonical order."""
    front = front_gates(session.pending, session.graph.num_nodes)
    costs = swap_costs(front, session.mapping.l2p, session.graph)
    best = min(costs)
    return [i for i, c in enumerate(costs) if c == best]


def base_step(session: RoutingSession) -> Edge:
    """The swap BASE commits next: strictly-best-first over canonical order."""
    return session.graph.edges[minimal_swaps(session)[0]]


def base_route(lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping] = None) -> RoutingResult:
    session = RoutingSession(lc, g, tau_ini, router="base")
    session.flush()
    while not session.done:
        if session.stalled():
            session.escape()
            continue
        session.commit(base_step(session))
    return session.finish()


def ann_qct_route(
    lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping], model: "PolicyModel"
) -> RoutingResult:
    """
    Commits the swap with the highest recommendation probability, re-querying
    the model after every swap. After ``num_nodes * |E|`` idle swaps each
    step falls back to BASE; after twice that the shortest-path escape runs.
    """
    model.check_compatible(g)
    session = RoutingSession(lc, g, tau_ini, router="ann-qct")
    session.flush()
    while not session.done:
        if session.stalled(2):
            session.escape()
            continue
        if session.stalled():
            session.stats["fallbacks"] += 1
            session.commit(base_step(session))
            continue
        probs = model.recommend(session.pending, session.mapping)
        session.commit(g.edges[int(np.argmax(probs))])
    return session.finish()


def base_ann_route(
    lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping], model: "PolicyModel"
) -> RoutingResult:
    """BASE, except that ties for the minimal cost go to the most recommended swap."""
    model.check_compatible(g)
    session = RoutingSession(lc, g, tau_ini, router="base-ann")
    session.flush()
    while not session.done:
        if session.stalled():
            session.escape()
            continue
        ties = minimal_swaps(session)
        choice = ties[0]
        if len(ties) > 1:
            probs = model.recommend(session.pending, session.mapping)
            # max keeps the first maximum, i.e. the canonical-first edge
            choice = max(ties, key=lambda i: probs[i])
        session.commit(g.edges[choice])
    return session.finish()
