import math
from typing import Dict, Iterable


def gate_count_reduction(n_base: int, n_test: int) -> float:
    """(n_base - n_test) / n_base; negative when the tested router is worse."""
    if n_base == 0:
        raise ValueError("gate_count_reduction is undefined for n_base = 0")
    return (n_base - n_test) / n_base


def time_efficiency(gate_count: int, elapsed: float) -> float:
    """Input gates routed per second."""
    if gate_count == 0:
        return 0.0
    if elapsed <= 0:
        raise ValueError("time_efficiency needs a positive elapsed time")
    return gate_count / elapsed


def improvement_histogram(values: Iterable[float], width: float = 0.05) -> Dict[float, int]:
    """Counts per bucket ``[k*width, (k+1)*width)``, keyed by the rounded lower edge."""
    hist: Dict[float, int] = {}
    for v in values:
        lower = round(math.floor(v / width + 1e-9) * width, 6)
        hist[lower] = hist.get(lower, 0) + 1
    return dict(sorted(hist.items()))
