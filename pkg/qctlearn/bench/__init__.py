from qctlearn.bench.harness import BenchConfig, CircuitSource, CompareReport, RouterSpec, run_compare
from qctlearn.bench.metrics import gate_count_reduction, improvement_histogram, time_efficiency
from qctlearn.bench.scaling import ScalingReport, labelgen_timing

__all__ = [
    "BenchConfig",
    "CircuitSource",
    "CompareReport",
    "RouterSpec",
    "run_compare",
    "gate_count_reduction",
    "improvement_histogram",
    "time_efficiency",
    "ScalingReport",
    "labelgen_timing",
]
