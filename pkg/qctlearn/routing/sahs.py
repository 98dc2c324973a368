"""
Depth-d look-ahead search router (SAHS) and its policy-pruned variant.

Every decision grows a tree of swap sequences up to depth d from the current
state, executing whatever becomes executable at each node. Leaves are scored
by `node_value`; the first swap on the path to the best leaf is committed.
"""
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Tuple

from qctlearn.arch.graph import ArchGraph, Edge
from qctlearn.circuit.ir import Circuit, Gate
from qctlearn.routing.core import (
    RoutingResult,
    RoutingSession,
    layer_cost,
    leading_layers,
    split_executable,
)
from qctlearn.routing.mapping import Mapping
from qctlearn.routing.pruning import check_ratio, kept_candidates
from qctlearn.settings import settings
from qctlearn.utils.logging import get_logger

if TYPE_CHECKING:
    from qctlearn.policy.network import PolicyModel

logger = get_logger("SAHS")

CandidateFn = Callable[["SearchNode"], Sequence[int]]


@dataclass(frozen=True)
class SahsParams:
    """
    Attributes:
        depth (int): Search depth d (swaps per tree path).
        lookahead_layers (int): Layers past the front layer included in the
            node heuristic.
        decay (float): Weight multiplier per look-ahead layer, in (0, 1].
        weight (float): Scale of the distance penalty against executed gates.
    """
    depth: int = 2
    lookahead_layers: int = 2
    decay: float = 0.5
    weight: float = 1.0

    def __post_init__(self) -> None:
        if self.depth < 1:
            raise ValueError(f"search depth must be >= 1, got {self.depth}")
        if not (0.0 < self.decay <= 1.0):
            raise ValueError(f"look-ahead decay must lie in (0, 1], got {self.decay}")
        if self.lookahead_layers < 0:
            raise ValueError("lookahead_layers must be non-negative")

    @classmethod
    def from_settings(cls, depth: Optional[int] = None) -> "SahsParams":
        s = settings.sahs
        return cls(
            depth=depth if depth is not None else s.DEPTH,
            lookahead_layers=s.LOOKAHEAD_LAYERS,
            decay=s.DECAY,
            weight=s.WEIGHT,
        )


@dataclass
class SearchNode:
    mapping: Mapping
    remaining: List[Gate]
    swaps_from_root: Tuple[Edge, ...] = ()
    executed_count: int = 0
    heuristic_value: float = 0.0

    @property
    def depth(self) -> int:
        return len(self.swaps_from_root)


def node_value(n: SearchNode, params: SahsParams, graph: ArchGraph) -> float:
    """
    executed_count - weight * sum_k decay^k * cost(layer k of the remainder),
    over the front layer and `lookahead_layers` further layers. Higher is better.
    """
    if not n.remaining:
        return float(n.executed_count)
    rows = graph.distance.rows
    penalty = 0.0
    factor = 1.0
    for layer in leading_layers(n.remaining, params.lookahead_layers + 1, graph.num_nodes):
        penalty += factor * layer_cost(layer, n.mapping.l2p, rows)
        factor *= params.decay
    return n.executed_count - params.weight * penalty


class SahsSearch:
    """One decision's search tree over the session's current state."""

    def __init__(self, graph: ArchGraph, params: SahsParams, candidates: Optional[CandidateFn] = None):
        self.graph = graph
        self.params = params
        self.candidates = candidates
        self.expansions = 0
        self._rows = graph.distance.rows

    def best_path(self, mapping: Mapping, pending: Sequence[Gate]) -> Tuple[Edge, ...]:
        root = SearchNode(mapping=mapping, remaining=list(pending))
        best: Optional[Tuple[Tuple[float, int], SearchNode]] = None

        stack = [root]
        # explicit DFS; children are pushed reversed so canonical order is visited first
        while stack:
            node = stack.pop()
            if node.depth == self.params.depth or not node.remaining:
                node.heuristic_value = node_value(node, self.params, self.graph)
                key = (node.heuristic_value, -node.depth)
                if best is None or key > best[0]:
                    best = (key, node)
                continue
            children = self._open(node)
            stack.extend(reversed(children))

        assert best is not None
        return best[1].swaps_from_root

    def _open(self, node: SearchNode) -> List[SearchNode]:
        self.expansions += 1
        edges = self.graph.edges
        indices = self.candidates(node) if self.candidates else range(len(edges))
        children = []
        for i in indices:
            u, v = edges[i]
            m = node.mapping.swapped(u, v)
            executed, remaining = split_executable(node.remaining, m.l2p, self._rows)
            children.append(SearchNode(
                mapping=m,
                remaining=remaining,
                swaps_from_root=node.swaps_from_root + ((u, v),),
                executed_count=node.executed_count + len(executed),
            ))
        return children


def _run(session: RoutingSession, search: SahsSearch) -> RoutingResult:
    session.flush()
    while not session.done:
        if session.stalled():
            session.escape()
            continue
        path = search.best_path(session.mapping, session.pending)
        session.commit(path[0])
    session.stats["node_expansions"] = search.expansions
    logger.debug(f"{session.router}: {search.expansions} node expansions")
    return session.finish()


def sahs_route(
    lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping] = None, params: Optional[SahsParams] = None
) -> RoutingResult:
    params = params or SahsParams.from_settings()
    session = RoutingSession(lc, g, tau_ini, router="sahs")
    return _run(session, SahsSearch(g, params))


def sahs_ann_route(
    lc: Circuit,
    g: ArchGraph,
    tau_ini: Optional[Mapping],
    params: Optional[SahsParams],
    model: "PolicyModel",
    pruning_ratio: float,
) -> RoutingResult:
    """
    SAHS where, before a node is opened, the model scores its |E| candidate
    swaps and the lowest ``floor(pruning_ratio * |E|)`` are discarded. A ratio
    of 0 never consults the model and reproduces `sahs_route`.
    """
    check_ratio(pruning_ratio)
    params = params or SahsParams.from_settings()
    candidates: Optional[CandidateFn] = None
    if pruning_ratio > 0:
        model.check_compatible(g)

        def prune(node: SearchNode) -> Sequence[int]:
            return kept_candidates(model.recommend(node.remaining, node.mapping), pruning_ratio)

        candidates = prune

    session = RoutingSession(lc, g, tau_ini, router="sahs-ann")
    return _run(session, SahsSearch(g, params, candidates))
