import time
from dataclasses import dataclass, field
from typing import List, Sequence, Tuple

import numpy as np

from qctlearn.arch.graph import ArchGraph
from qctlearn.datagen.circuits import gen_training_circuits
from qctlearn.datagen.labels import label_sahs
from qctlearn.exceptions import BenchError
from qctlearn.utils.logging import get_logger

logger = get_logger("Scaling")


@dataclass
class ScalingReport:
    """Seconds per label against |V|, with the fitted log-log line ``log t = slope * log |V| + intercept``."""
    archs: List[str] = field(default_factory=list)
    sizes: List[int] = field(default_factory=list)
    seconds_per_label: List[float] = field(default_factory=list)
    slope: float = 0.0
    intercept: float = 0.0

    def rows(self) -> List[dict]:
        return [
            {"arch": a, "num_nodes": n, "seconds_per_label": t}
            for a, n, t in zip(self.archs, self.sizes, self.seconds_per_label)
        ]


def fit_exponent(sizes: Sequence[int], seconds: Sequence[float]) -> Tuple[float, float]:
    """Least-squares line through (log size, log seconds); returns (slope, intercept)."""
    if len(set(sizes)) < 3:
        raise BenchError(f"a scaling fit needs at least 3 distinct sizes, got {sorted(set(sizes))}")
    if min(seconds) <= 0:
        raise BenchError("timings must be positive for a log-log fit")
    slope, intercept = np.polyfit(np.log(sizes), np.log(seconds), 1)
    return float(slope), float(intercept)


def labelgen_timing(archs: Sequence[ArchGraph], n_samples: int, n_l: int = 3, depth: int = 2, seed: int = 0) -> ScalingReport:
    """
    Times depth-`depth` look-ahead labeling of `n_samples` random `n_l`-layer
    circuits on each architecture and fits the growth exponent in |V|.

    Raises:
        BenchError: fewer than 3 distinct architecture sizes, or n_samples < 1.
    """
    if len({g.num_nodes for g in archs}) < 3:
        raise BenchError("labelgen_timing needs at least 3 architectures of different sizes")
    if n_samples < 1:
        raise BenchError("n_samples must be positive")

    report = ScalingReport()
    for g in sorted(archs, key=lambda a: a.num_nodes):
        circuits = gen_training_circuits(g.num_nodes, n_l, n_samples, seed)
        start = time.perf_counter()
        for c in circuits:
            label_sahs(c, g, d=depth)
        per_label = (time.perf_counter() - start) / len(circuits)
        logger.info(f"{g.name}: |V|={g.num_nodes}, {per_label:.4f}s per label")
        report.archs.append(g.name)
        report.sizes.append(g.num_nodes)
        report.seconds_per_label.append(per_label)

    report.slope, report.intercept = fit_exponent(report.sizes, report.seconds_per_label)
    logger.info(f"Label generation grows as |V|^{report.slope:.2f}")
    return report
