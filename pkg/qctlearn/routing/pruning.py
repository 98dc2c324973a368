import math
from typing import List, Sequence


def check_ratio(ratio: float) -> float:
    if not (0.0 <= ratio < 1.0):
        raise ValueError(f"pruning ratio must lie in [0, 1), got {ratio}")
    return ratio


def prune_count(num_edges: int, ratio: float) -> int:
    """floor(ratio * |E|), never pruning the last candidate."""
    return min(math.floor(check_ratio(ratio) * num_edges), num_edges - 1)


def kept_candidates(probs: Sequence[float], ratio: float) -> List[int]:
    """
    Edge indices that survive pruning, in canonical order.

    The ``floor(ratio * |E|)`` lowest-probability candidates are dropped;
    among equal probabilities the higher edge index goes first.
    """
    n = len(probs)
    k = prune_count(n, ratio)
    if k <= 0:
        return list(range(n))
    order = sorted(range(n), key=lambda i: (probs[i], -i))
    dropped = set(order[:k])
    return [i for i in range(n) if i not in dropped]
