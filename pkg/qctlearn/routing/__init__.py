from qctlearn.routing.baseline import ann_qct_route, base_ann_route, base_route
from qctlearn.routing.core import RoutingResult, RoutingSession, cost, executable_gates
from qctlearn.routing.mapping import Mapping, apply_swap
from qctlearn.routing.mcts import MctsNode, MctsParams, MctsSearch, best_of, decide, mcts_ann_route, mcts_route
from qctlearn.routing.sahs import SahsParams, SearchNode, node_value, sahs_ann_route, sahs_route
from qctlearn.routing.verify import (
    VerificationResult,
    check_connectivity,
    decompose_swaps,
    min_swap_brute_force,
    verify,
)

__all__ = [
    "Mapping",
    "apply_swap",
    "RoutingResult",
    "RoutingSession",
    "cost",
    "executable_gates",
    "base_route",
    "ann_qct_route",
    "base_ann_route",
    "SahsParams",
    "SearchNode",
    "node_value",
    "sahs_route",
    "sahs_ann_route",
    "MctsNode",
    "MctsParams",
    "MctsSearch",
    "best_of",
    "decide",
    "mcts_route",
    "mcts_ann_route",
    "VerificationResult",
    "check_connectivity",
    "decompose_swaps",
    "min_swap_brute_force",
    "verify",
]
