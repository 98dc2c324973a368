"""
Monte-Carlo tree search router and its root-pruned variant MCTS-ANN.

Each decision runs `n_bp` iterations of selection (UCT over a progressively
widened, heuristically ranked set of swaps), expansion (all candidate
swaps), simulation (epsilon-greedy rollout) and max-backup, then commits the
best root child and reuses its subtree as the next root.
"""
import math
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence

import numpy as np

from qctlearn.arch.graph import ArchGraph, Edge
from qctlearn.circuit.ir import Circuit, Gate
from qctlearn.exceptions import SearchError
from qctlearn.routing.core import (
    RoutingResult,
    RoutingSession,
    front_gates,
    split_executable,
    swap_costs,
)
from qctlearn.routing.mapping import Mapping
from qctlearn.routing.pruning import check_ratio, kept_candidates
from qctlearn.settings import settings
from qctlearn.utils.logging import get_logger

if TYPE_CHECKING:
    from qctlearn.policy.network import PolicyModel

logger = get_logger("MCTS")

SCORES = ("visits", "value")


@dataclass(frozen=True)
class MctsParams:
    """
    Attributes:
        n_bp (int): Iterations per decision.
        exploration_c (float): UCT exploration constant.
        sim_depth (int): Swaps per rollout; 0 disables simulation.
        epsilon (float): Probability of a uniformly random rollout swap.
        swap_penalty (float): Subtracted from the executed-gate count per swap.
        discount (float): Per-step discount for rollouts and backpropagation.
        score (str): "visits" (robust child) or "value" (best backed-up value).
        seed (int): Root of every per-iteration random stream.
    """
    n_bp: int = 20
    exploration_c: float = math.sqrt(2.0)
    sim_depth: int = 8
    epsilon: float = 0.1
    swap_penalty: float = 0.3
    discount: float = 0.9
    score: str = "visits"
    seed: int = 0

    def __post_init__(self) -> None:
        if self.n_bp < 1:
            raise ValueError(f"n_bp must be >= 1, got {self.n_bp}")
        if self.sim_depth < 0:
            raise ValueError("sim_depth must be non-negative")
        if self.score not in SCORES:
            raise ValueError(f"score must be one of {SCORES}, got {self.score!r}")
        if self.seed < 0:
            raise ValueError("seed must be non-negative")

    @classmethod
    def from_settings(
        cls,
        n_bp: Optional[int] = None,
        seed: int = 0,
        sim_depth: Optional[int] = None,
        labeling: bool = False,
    ) -> "MctsParams":
        """`labeling` selects the exploration constant used for label generation."""
        s = settings.mcts
        return cls(
            n_bp=n_bp if n_bp is not None else s.N_BP,
            exploration_c=s.LABEL_EXPLORATION_C if labeling else s.EXPLORATION_C,
            sim_depth=sim_depth if sim_depth is not None else s.SIM_DEPTH,
            epsilon=s.EPSILON,
            swap_penalty=s.SWAP_PENALTY,
            discount=s.DISCOUNT,
            score=s.SCORE,
            seed=seed,
        )


class MctsNode:
    """
    A search state: mapping plus the gates not yet executed. `reward` is
    what the incoming swap earned (executed gates minus the swap penalty).

    `children` keeps canonical edge order; `ranked` holds the same children
    ordered by how promising the swap looks before any simulation.
    """
    __slots__ = (
        "mapping", "remaining", "swap", "edge_index", "reward", "parent", "children",
        "ranked", "visit_count", "total_value", "best_value", "expanded",
    )

    def __init__(
        self,
        mapping: Mapping,
        remaining: List[Gate],
        swap: Optional[Edge] = None,
        edge_index: int = -1,
        reward: float = 0.0,
        parent: Optional["MctsNode"] = None,
    ):
        self.mapping = mapping
        self.remaining = remaining
        self.swap = swap
        self.edge_index = edge_index
        self.reward = reward
        self.parent = parent
        self.children: List["MctsNode"] = []
        self.ranked: List["MctsNode"] = []
        self.visit_count = 0
        self.total_value = 0.0
        self.best_value = -math.inf
        self.expanded = False

    @property
    def terminal(self) -> bool:
        return not self.remaining

    @property
    def mean_value(self) -> float:
        return self.total_value / self.visit_count if self.visit_count else 0.0

    def __repr__(self) -> str:
        return f"MctsNode(swap={self.swap}, visits={self.visit_count}, best={self.best_value:.3f})"


def best_child(root: Optional[MctsNode], score: str = "visits") -> MctsNode:
    """
    Most visited root child, or the one with the best backed-up value when
    `score` is "value". The canonical-first edge wins ties.
    """
    if root is None or not root.children:
        raise SearchError("decision requested on an unexpanded root")
    if score == "visits":
        def key(c: MctsNode) -> float:
            return c.visit_count
    else:
        def key(c: MctsNode) -> float:
            return c.best_value
    best = root.children[0]
    for c in root.children[1:]:
        if key(c) > key(best):
            best = c
    return best


def decide(root: Optional[MctsNode], score: str = "visits") -> Edge:
    child = best_child(root, score)
    assert child.swap is not None
    return child.swap


def widening(visit_count: int) -> int:
    """How many ranked children a node with `visit_count` visits may select from."""
    return 1 + math.isqrt(visit_count)


class MctsSearch:
    """
    Search tree plus the iteration machinery. The random stream of iteration
    `it` at decision `k` is ``default_rng([seed, k, it])``.

    Selection only considers the first ``widening(N)`` ranked children of a
    node with N visits, tries each unvisited one of them first and then
    applies UCT to the min-max normalized best values of that pool.
    """

    def __init__(
        self,
        graph: ArchGraph,
        params: MctsParams,
        prune: Optional[Callable[[MctsNode], Sequence[int]]] = None,
    ):
        self.graph = graph
        self.params = params
        self.prune = prune
        self.root: Optional[MctsNode] = None
        self.decision = 0
        self.expansions = 0
        self._rows = graph.distance.rows

    def reset(self, mapping: Mapping, pending: Sequence[Gate]) -> MctsNode:
        self.root = MctsNode(mapping, list(pending))
        self._prepare_root()
        return self.root

    def advance(self, child: MctsNode) -> None:
        """Makes `child` the root, keeping its subtree."""
        child.parent = None
        self.root = child
        self.decision += 1
        self._prepare_root()

    def _prepare_root(self) -> None:
        root = self.root
        assert root is not None
        if not root.expanded and not root.terminal:
            self.expand(root)
        if self.prune is None or not root.children:
            return
        keep = set(self.prune(root))
        removed = [c for c in root.children if c.edge_index not in keep]
        root.children = [c for c in root.children if c.edge_index in keep]
        root.ranked = [c for c in root.ranked if c.edge_index in keep]
        root.visit_count -= sum(c.visit_count for c in removed)

    def expand(self, node: MctsNode) -> None:
        self.expansions += 1
        node.expanded = True
        penalty = self.params.swap_penalty
        costs = swap_costs(front_gates(node.remaining, self.graph.num_nodes), node.mapping.l2p, self.graph)
        order = []
        for i, (u, v) in enumerate(self.graph.edges):
            m = node.mapping.swapped(u, v)
            executed, remaining = split_executable(node.remaining, m.l2p, self._rows)
            node.children.append(MctsNode(m, remaining, (u, v), i, len(executed) - penalty, node))
            order.append((-len(executed), costs[i], i))
        node.ranked = [node.children[i] for _, _, i in sorted(order)]

    def run(self, iterations: Optional[int] = None) -> None:
        for it in range(iterations if iterations is not None else self.params.n_bp):
            self.iterate(it)

    def iterate(self, it: int) -> None:
        root = self.root
        if root is None:
            raise SearchError("search has no root")
        rng = np.random.default_rng([self.params.seed, self.decision, it])

        node = root
        path = [root]
        while node.children:
            node = self._select(node)
            path.append(node)
        if not node.expanded and not node.terminal and (node is root or node.visit_count > 0):
            self.expand(node)
            node = self._select(node)
            path.append(node)

        g = self._rollout(node, rng)
        gamma = self.params.discount
        for n in reversed(path[1:]):
            g = n.reward + gamma * g
            n.visit_count += 1
            n.total_value += g
            if g > n.best_value:
                n.best_value = g
        root.visit_count += 1

    def _select(self, node: MctsNode) -> MctsNode:
        pool = node.ranked[:widening(node.visit_count)]
        for child in pool:
            if child.visit_count == 0:
                return child
        lo = min(c.best_value for c in pool)
        span = max(c.best_value for c in pool) - lo
        log_n = math.log(node.visit_count)
        c = self.params.exploration_c
        best, best_score = pool[0], -math.inf
        for child in pool:
            q = (child.best_value - lo) / span if span > 0 else 0.0
            s = q + c * math.sqrt(log_n / child.visit_count)
            if s > best_score:
                best, best_score = child, s
        return best

    def _rollout(self, node: MctsNode, rng: np.random.Generator) -> float:
        p = self.params
        if p.sim_depth == 0 or node.terminal:
            return 0.0
        edges = self.graph.edges
        n = self.graph.num_nodes
        mapping, remaining = node.mapping, node.remaining
        total, factor = 0.0, 1.0
        for _ in range(p.sim_depth):
            if not remaining:
                break
            if rng.random() < p.epsilon:
                i = int(rng.integers(len(edges)))
            else:
                costs = swap_costs(front_gates(remaining, n), mapping.l2p, self.graph)
                i = costs.index(min(costs))
            u, v = edges[i]
            mapping = mapping.swapped(u, v)
            executed, remaining = split_executable(remaining, mapping.l2p, self._rows)
            total += factor * (len(executed) - p.swap_penalty)
            factor *= p.discount
        return total

    def child_visits(self) -> np.ndarray:
        """Visit counts of the root's children indexed by canonical edge; pruned edges are 0."""
        out = np.zeros(self.graph.num_edges, dtype=np.float64)
        if self.root is not None:
            for c in self.root.children:
                out[c.edge_index] = c.visit_count
        return out


def _run(session: RoutingSession, search: MctsSearch) -> RoutingResult:
    session.flush()
    while not session.done:
        if session.stalled():
            session.escape()
            search.root = None
            continue
        if search.root is None:
            search.reset(session.mapping, session.pending)
        search.run()
        child = best_child(search.root, search.params.score)
        assert child.swap is not None
        session.commit(child.swap)
        search.advance(child)
    session.stats["node_expansions"] = search.expansions
    return session.finish()


def mcts_route(
    lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping] = None, params: Optional[MctsParams] = None
) -> RoutingResult:
    params = params or MctsParams.from_settings()
    session = RoutingSession(lc, g, tau_ini, router="mcts")
    return _run(session, MctsSearch(g, params))


def mcts_ann_route(
    lc: Circuit,
    g: ArchGraph,
    tau_ini: Optional[Mapping],
    params: Optional[MctsParams],
    model: "PolicyModel",
    pruning_ratio: float,
) -> RoutingResult:
    """
    MCTS where every new root first loses its ``floor(pruning_ratio * |E|)``
    least recommended children. A ratio of 0 reproduces `mcts_route` under
    the same seed.
    """
    check_ratio(pruning_ratio)
    params = params or MctsParams.from_settings()
    prune: Optional[Callable[[MctsNode], Sequence[int]]] = None
    if pruning_ratio > 0:
        model.check_compatible(g)

        def by_model(root: MctsNode) -> Sequence[int]:
            return kept_candidates(model.recommend(root.remaining, root.mapping), pruning_ratio)

        prune = by_model
    session = RoutingSession(lc, g, tau_ini, router="mcts-ann")
    return _run(session, MctsSearch(g, params, prune))


def best_of(route: Callable[[int], RoutingResult], seeds: Sequence[int]) -> RoutingResult:
    """
    Runs a stochastic router once per seed and keeps the run with the fewest
    swaps (first seed on ties); its elapsed time becomes the mean over runs.
    """
    if not seeds:
        raise ValueError("best_of needs at least one seed")
    results = [route(s) for s in seeds]
    best = min(results, key=lambda r: r.swap_count)
    mean_elapsed = sum(r.elapsed for r in results) / len(results)
    stats = dict(best.stats)
    stats["runs"] = len(results)
    return replace(best, elapsed=mean_elapsed, stats=stats)
