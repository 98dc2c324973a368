"""
Router comparison runs: every (circuit, router) cell is routed, verified and
recorded; results go to CSV, a summary table, improvement histograms and
optional SVG charts.
"""
import csv
import json
try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from joblib import Parallel, delayed
from pydantic import BaseModel, Field, ValidationError, model_validator

from qctlearn.arch.graph import ArchGraph, get_architecture
from qctlearn.bench import charts
from qctlearn.bench.metrics import gate_count_reduction, improvement_histogram, time_efficiency
from qctlearn.circuit.ir import Circuit, random_circuit
from qctlearn.datagen.circuits import load_qasm_corpus
from qctlearn.exceptions import BenchError
from qctlearn.models import BenchRecord
from qctlearn.plugins import RouterOptions, router_registry, run_verified
from qctlearn.policy.network import PolicyModel
from qctlearn.policy.store import load as load_model
from qctlearn.telemetry import TelemetryManager
from qctlearn.utils.logging import bind_context, get_logger, reset_context

logger = get_logger("Bench")

RESULT_FIELDS = ["circuit_id", "router", "swap_count", "cnot_overhead", "elapsed_s", "seed", "input_gates", "runs"]
SUMMARY_FIELDS = [
    "router", "circuits", "swap_count", "cnot_overhead", "input_gates",
    "elapsed_s", "gates_per_s", "gate_count_reduction",
]


class RouterSpec(BaseModel):
    """One router column of a comparison. `label` defaults to a name built from the parameters."""
    name: str
    label: Optional[str] = None
    model: Optional[str] = None
    depth: Optional[int] = Field(default=None, ge=1)
    pruning_ratio: float = Field(default=0.0, ge=0.0, lt=1.0)
    n_bp: Optional[int] = Field(default=None, ge=1)
    sim_depth: Optional[int] = Field(default=None, ge=0)

    @property
    def display(self) -> str:
        if self.label:
            return self.label
        parts = [self.name]
        if self.depth is not None:
            parts.append(f"d{self.depth}")
        if self.pruning_ratio:
            parts.append(f"r{self.pruning_ratio:g}")
        if self.n_bp is not None:
            parts.append(f"nbp{self.n_bp}")
        return "-".join(parts)

    def options(self) -> RouterOptions:
        return RouterOptions(
            depth=self.depth, pruning_ratio=self.pruning_ratio, n_bp=self.n_bp, sim_depth=self.sim_depth
        )


class CircuitSource(BaseModel):
    """Either a QASM corpus directory or random circuits (optionally a gate-count series)."""
    corpus: Optional[str] = None
    num_circuits: int = Field(default=10, ge=0)
    num_gates: int = Field(default=200, ge=1)
    gate_counts: Optional[List[int]] = None
    seed: int = 0


class BenchConfig(BaseModel):
    arch: str
    routers: List[RouterSpec]
    circuits: CircuitSource = Field(default_factory=CircuitSource)
    seeds: List[int] = Field(default_factory=lambda: [0, 1, 2, 3, 4])
    baseline: Optional[str] = "base"
    out_dir: str = "bench-out"
    workers: int = Field(default=1, ge=1)
    charts: bool = True

    @model_validator(mode="after")
    def check_routers(self) -> "BenchConfig":
        if not self.routers:
            raise ValueError("at least one router is required")
        names = [r.display for r in self.routers]
        if len(set(names)) != len(names):
            raise ValueError(f"router labels must be unique, got {names}")
        if not self.seeds:
            raise ValueError("at least one seed is required")
        return self

    @classmethod
    def from_file(cls, path: Union[str, Path], **overrides: Any) -> "BenchConfig":
        """Reads a TOML or JSON config; keyword overrides win over file values."""
        p = Path(path)
        try:
            if p.suffix.lower() == ".toml":
                data = tomllib.loads(p.read_text(encoding="utf-8"))
            else:
                data = json.loads(p.read_text(encoding="utf-8"))
        except (OSError, ValueError) as e:
            raise BenchError(f"cannot read bench config {p}: {e}") from e
        data.update({k: v for k, v in overrides.items() if v is not None})
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            raise BenchError(f"invalid bench config {p}: {e}") from e


@dataclass
class CompareReport:
    records: List[BenchRecord] = field(default_factory=list)
    summary: List[Dict[str, Any]] = field(default_factory=list)
    improvements: Dict[str, List[float]] = field(default_factory=dict)
    errors: List[str] = field(default_factory=list)
    files: Dict[str, Path] = field(default_factory=dict)


def build_circuits(source: CircuitSource, graph: ArchGraph) -> List[Tuple[str, Circuit]]:
    if source.corpus:
        out = load_qasm_corpus(source.corpus)
        for cid, c in out:
            if c.num_qubits > graph.num_nodes:
                raise BenchError(f"corpus circuit {cid} needs {c.num_qubits} qubits, {graph.name} has {graph.num_nodes}")
        return out
    n = graph.num_nodes
    if source.gate_counts:
        return [
            (f"g{count}-{i:03d}", random_circuit(n, count, source.seed + 1000 * k + i))
            for k, count in enumerate(source.gate_counts)
            for i in range(source.num_circuits)
        ]
    return [(f"rand{i:03d}", random_circuit(n, source.num_gates, source.seed + i)) for i in range(source.num_circuits)]


def load_models(cfg: BenchConfig, graph: ArchGraph) -> Dict[str, Optional[PolicyModel]]:
    """
    Loads and checks every router's model before anything runs.

    Raises:
        BenchError: unknown router or missing model path.
        ModelMismatchError: a model trained for another graph.
    """
    models: Dict[str, Optional[PolicyModel]] = {}
    for spec in cfg.routers:
        entry = router_registry.get(spec.name)
        if entry.needs_model and not spec.model:
            raise BenchError(f"router {spec.display} needs a model (--model)")
        models[spec.display] = load_model(spec.model, graph) if spec.model else None
    return models


def run_cell(
    circuit_id: str,
    lc: Circuit,
    graph: ArchGraph,
    spec: RouterSpec,
    model: Optional[PolicyModel],
    seeds: Sequence[int],
) -> Tuple[Optional[BenchRecord], Optional[str]]:
    """Routes one circuit with one router (best-of-seeds when stochastic) and verifies the output."""
    token = bind_context(circuit=circuit_id, router=spec.display)
    try:
        entry = router_registry.get(spec.name)
        result, check = run_verified(entry, lc, graph, spec.options(), model, seeds)
        if not check:
            return None, f"{spec.display} on {circuit_id}: {check.reason}"
        return BenchRecord(
            circuit_id=circuit_id,
            router=spec.display,
            swap_count=result.swap_count,
            cnot_overhead=result.cnot_overhead,
            elapsed_s=result.elapsed,
            seed=seeds[0] if entry.stochastic else None,
            input_gates=len(lc),
            runs=len(seeds) if entry.stochastic else 1,
        ), None
    finally:
        reset_context(token)


def summarize(
    records: Sequence[BenchRecord], order: Sequence[str], baseline: Optional[str]
) -> Tuple[List[Dict[str, Any]], Dict[str, List[float]]]:
    """Per-router totals and per-circuit improvements over `baseline` (when it is one of the routers)."""
    by_router: Dict[str, List[BenchRecord]] = {name: [] for name in order}
    for r in records:
        by_router.setdefault(r.router, []).append(r)

    base_total: Optional[int] = None
    base_by_circuit: Dict[str, int] = {}
    if baseline in by_router:
        base_total = sum(r.cnot_overhead for r in by_router[baseline])
        base_by_circuit = {r.circuit_id: r.cnot_overhead for r in by_router[baseline]}

    rows: List[Dict[str, Any]] = []
    improvements: Dict[str, List[float]] = {}
    for name, recs in by_router.items():
        overhead = sum(r.cnot_overhead for r in recs)
        gates = sum(r.input_gates for r in recs)
        elapsed = sum(r.elapsed_s for r in recs)
        reduction: Optional[float] = None
        if base_total and name != baseline:
            reduction = gate_count_reduction(base_total, overhead)
        if base_by_circuit and name != baseline:
            improvements[name] = [
                gate_count_reduction(base_by_circuit[r.circuit_id], r.cnot_overhead)
                for r in recs
                if base_by_circuit.get(r.circuit_id)
            ]
        rows.append({
            "router": name,
            "circuits": len(recs),
            "swap_count": sum(r.swap_count for r in recs),
            "cnot_overhead": overhead,
            "input_gates": gates,
            "elapsed_s": elapsed,
            "gates_per_s": time_efficiency(gates, elapsed) if elapsed > 0 else 0.0,
            "gate_count_reduction": reduction,
        })
    return rows, improvements


def format_summary(rows: Sequence[Dict[str, Any]]) -> str:
    header = f"{'router':<22}{'circuits':>9}{'swaps':>9}{'cnot+':>9}{'gates/s':>12}{'reduction':>11}"
    lines = [header, "-" * len(header)]
    for row in rows:
        red = row["gate_count_reduction"]
        lines.append(
            f"{row['router']:<22}{row['circuits']:>9}{row['swap_count']:>9}{row['cnot_overhead']:>9}"
            f"{row['gates_per_s']:>12.1f}{'--' if red is None else f'{100 * red:.2f}%':>11}"
        )
    return "\n".join(lines)


def write_records(records: Sequence[BenchRecord], path: Union[str, Path]) -> Path:
    p = Path(path)
    with open(p, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=RESULT_FIELDS)
        writer.writeheader()
        for r in records:
            writer.writerow(r.model_dump(include=set(RESULT_FIELDS)))
    return p


def read_records(path: Union[str, Path]) -> List[BenchRecord]:
    with open(path, newline="", encoding="utf-8") as f:
        return [
            BenchRecord.model_validate({k: (v if v != "" else None) for k, v in row.items()})
            for row in csv.DictReader(f)
        ]


def write_rows(rows: Sequence[Dict[str, Any]], fields: Sequence[str], path: Path) -> Path:
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=list(fields))
        writer.writeheader()
        for row in rows:
            writer.writerow(row)
    return path


def gate_count_series(records: Sequence[BenchRecord], order: Sequence[str]) -> Tuple[List[int], Dict[str, List[int]]]:
    """Total CNOT overhead per router for each input gate count."""
    counts = sorted({r.input_gates for r in records})
    series = {name: [0] * len(counts) for name in order}
    pos = {c: i for i, c in enumerate(counts)}
    for r in records:
        series.setdefault(r.router, [0] * len(counts))[pos[r.input_gates]] += r.cnot_overhead
    return counts, series


def run_compare(cfg: BenchConfig, circuits: Optional[List[Tuple[str, Circuit]]] = None) -> CompareReport:
    """
    Routes every circuit with every configured router and writes the reports
    into ``cfg.out_dir``. Cells whose output fails verification are reported
    in ``CompareReport.errors`` and left out of the records.

    Raises:
        BenchError: no input circuits or an invalid router setup.
        ModelMismatchError: a model does not fit the architecture.
    """
    graph = get_architecture(cfg.arch)
    models = load_models(cfg, graph)
    if circuits is None:
        circuits = build_circuits(cfg.circuits, graph)
    if not circuits:
        raise BenchError("no inputs: the circuit list is empty")

    order = [spec.display for spec in cfg.routers]
    logger.info(f"Comparing {', '.join(order)} on {len(circuits)} circuits ({graph.name}, {cfg.workers} workers)")

    outcomes = Parallel(n_jobs=cfg.workers, backend="loky")(
        delayed(run_cell)(cid, lc, graph, spec, models[spec.display], cfg.seeds)
        for cid, lc in circuits
        for spec in cfg.routers
    )

    report = CompareReport()
    for record, error in outcomes:
        if error is not None:
            logger.error(f"Verification failed: {error}")
            report.errors.append(error)
        elif record is not None:
            report.records.append(record)

    report.summary, report.improvements = summarize(report.records, order, cfg.baseline)

    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    report.files["results"] = write_records(report.records, out / "results.csv")
    report.files["summary"] = write_rows(report.summary, SUMMARY_FIELDS, out / "summary.csv")
    hist_rows = [
        {"router": name, "bucket": bucket, "circuits": count}
        for name, vals in report.improvements.items()
        for bucket, count in improvement_histogram(vals).items()
    ]
    report.files["histogram"] = write_rows(hist_rows, ["router", "bucket", "circuits"], out / "histogram.csv")

    counts: List[int] = []
    series: Dict[str, List[int]] = {}
    if cfg.circuits.gate_counts:
        counts, series = gate_count_series(report.records, order)
        series_rows = [
            {"router": name, "input_gates": c, "cnot_overhead": v}
            for name, vals in series.items()
            for c, v in zip(counts, vals)
        ]
        report.files["series"] = write_rows(series_rows, ["router", "input_gates", "cnot_overhead"], out / "series.csv")

    report.files["metrics"] = out / "metrics.prom"
    TelemetryManager().export_text(report.files["metrics"])

    if cfg.charts and report.records:
        rows = report.summary
        report.files["overhead_chart"] = charts.bar_chart(
            {r["router"]: r["cnot_overhead"] for r in rows}, out / "overhead.svg",
            "total CNOT overhead", f"CNOT overhead on {graph.name}",
        )
        report.files["efficiency_chart"] = charts.bar_chart(
            {r["router"]: r["gates_per_s"] for r in rows}, out / "time_efficiency.svg",
            "input gates per second", "Time efficiency",
        )
        if report.improvements and cfg.baseline:
            report.files["improvement_chart"] = charts.improvement_chart(
                report.improvements, out / "improvement.svg", cfg.baseline
            )
        if counts:
            report.files["series_chart"] = charts.series_chart(
                counts, series, out / "gate_counts.svg", "input CNOT gates", "total CNOT overhead",
                "Overhead by circuit size",
            )

    logger.info(f"Comparison finished: {len(report.records)} cells, {len(report.errors)} verification failures")
    return report
