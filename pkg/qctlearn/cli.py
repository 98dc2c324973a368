import json
import logging
from contextlib import contextmanager
from pathlib import Path
from typing import Iterator, List, Optional

import typer

from qctlearn.arch.graph import ArchGraph, get_architecture
from qctlearn.bench import charts
from qctlearn.bench.harness import BenchConfig, CircuitSource, RouterSpec, format_summary, run_compare, write_rows
from qctlearn.bench.scaling import labelgen_timing
from qctlearn.circuit.qasm import read_qasm, write_qasm
from qctlearn.datagen.circuits import gen_training_circuits, load_qasm_corpus, slice_realistic_corpus, split_corpus
from qctlearn.datagen.farm import load_dataset, run_label_farm
from qctlearn.exceptions import ModelMismatchError, QctError, VerificationError
from qctlearn.models import LabelerSpec
from qctlearn.plugins import router_registry, run_verified
from qctlearn.policy import store
from qctlearn.policy.train import TrainHyper, train
from qctlearn.settings import settings
from qctlearn.utils.logging import setup_logging

app = typer.Typer(help="qctlearn control interface: routing, label generation, training and benchmarks")

EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_INCOMPATIBLE = 3

DEFAULT_TIMING_ARCHS = ("grid:2x2", "grid:3x3", "grid:4x4", "grid:5x5")


@app.callback()
def main(
    log_level: str = typer.Option(settings.LOG_LEVEL, help="Logging level"),
    log_format: str = typer.Option(settings.LOG_FORMAT, help="text or json"),
) -> None:
    setup_logging(getattr(logging, log_level.upper(), logging.INFO), log_format)


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Maps library errors onto the documented exit codes."""
    try:
        yield
    except ModelMismatchError as e:
        typer.echo(f"Error: incompatible model: {e}", err=True)
        raise typer.Exit(code=EXIT_INCOMPATIBLE)
    except VerificationError as e:
        typer.echo(f"Error: verification failed: {e}", err=True)
        raise typer.Exit(code=EXIT_VERIFICATION)
    except (QctError, OSError, ValueError) as e:
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code=EXIT_USAGE)


def _arch(spec: str) -> ArchGraph:
    with _exit_codes():
        return get_architecture(spec)


@app.command()
def route(
    circuit: Path = typer.Argument(..., help="OpenQASM 2.0 input circuit"),
    arch: str = typer.Option(..., help="grid:RxC, a bundled device (tokyo, guadalupe, sycamore) or a topology JSON"),
    router: str = typer.Option("base", help="Router name"),
    model: Optional[Path] = typer.Option(None, help="Policy model for ANN routers"),
    depth: Optional[int] = typer.Option(None, help="Look-ahead search depth"),
    pruning_ratio: float = typer.Option(0.0, help="Fraction of candidates pruned by the model"),
    n_bp: Optional[int] = typer.Option(None, help="MCTS iterations per decision"),
    sim_depth: Optional[int] = typer.Option(None, help="MCTS rollout length"),
    seed: int = typer.Option(0, help="Seed for stochastic routers"),
    runs: int = typer.Option(1, help="Best-of-k runs for stochastic routers"),
    output: Optional[Path] = typer.Option(None, help="Write the physical circuit as QASM"),
    record: Optional[Path] = typer.Option(None, help="Write the routing record as JSON"),
) -> None:
    """Routes one circuit and verifies the result."""
    graph = _arch(arch)
    with _exit_codes():
        spec = RouterSpec(name=router, model=str(model) if model else None, depth=depth,
                          pruning_ratio=pruning_ratio, n_bp=n_bp, sim_depth=sim_depth)
        entry = router_registry.get(router)
        if entry.needs_model and model is None:
            typer.echo(f"Error: router {router} needs --model", err=True)
            raise typer.Exit(code=EXIT_USAGE)
        policy = store.load(model, graph) if model else None
        lc = read_qasm(circuit)
        seeds = list(range(seed, seed + max(runs, 1)))
        result, check = run_verified(entry, lc, graph, spec.options(), policy, seeds)
        if not check:
            raise VerificationError(check.reason)
        if output:
            write_qasm(result.physical_circuit, output)
        rec = result.to_record(str(output) if output else None)
        if record:
            record.write_text(rec.model_dump_json(indent=2), encoding="utf-8")
    typer.echo(f"{router}: {rec.swap_count} swaps (+{rec.cnot_overhead} CNOTs) in {rec.elapsed_s:.3f}s")


@app.command("gen-circuits")
def gen_circuits(
    out: Path = typer.Argument(..., help="Output directory for QASM files"),
    arch: str = typer.Option(..., help="Architecture; the circuits use all of its qubits"),
    n_l: int = typer.Option(3, help="Layers per circuit"),
    n_c: int = typer.Option(1000, help="Number of circuits"),
    seed: int = typer.Option(0, help="Generator seed"),
    corpus: Optional[Path] = typer.Option(None, help="Slice this QASM corpus instead of generating random circuits"),
    hold_out: int = typer.Option(0, help="Circuits held out into OUT/test (the rest go to OUT/train)"),
) -> None:
    """Writes training circuits of n_l layers each."""
    graph = _arch(arch)
    with _exit_codes():
        if corpus:
            circuits = slice_realistic_corpus([c for _, c in load_qasm_corpus(corpus)], n_l)
        else:
            circuits = gen_training_circuits(graph.num_nodes, n_l, n_c, seed)
        indexed = list(enumerate(circuits))
        if hold_out:
            train_part, test_part = split_corpus(indexed, hold_out, seed)
            parts = [(out / "train", train_part), (out / "test", test_part)]
        else:
            parts = [(out, indexed)]
        for directory, items in parts:
            for i, c in items:
                write_qasm(c, directory / f"circuit_{i:06d}.qasm")
    for directory, items in parts:
        typer.echo(f"Wrote {len(items)} circuits to {directory}")


@app.command("gen-labels")
def gen_labels(
    circuits: Path = typer.Argument(..., help="Directory of QASM training circuits"),
    out: Path = typer.Argument(..., help="Dataset output directory"),
    arch: str = typer.Option(..., help="Architecture graph"),
    labeler: str = typer.Option("sahs", help="Feeding router: sahs, mcts or base"),
    depth: int = typer.Option(settings.sahs.DEPTH, help="Look-ahead depth for the sahs labeler"),
    n_bp: int = typer.Option(settings.mcts.LABEL_N_BP, help="MCTS iterations for the mcts labeler"),
    sim_depth: Optional[int] = typer.Option(None, help="MCTS rollout length"),
    n_l: Optional[int] = typer.Option(None, help="Encoded layers (default 5 for mcts, 3 otherwise)"),
    workers: int = typer.Option(settings.WORKERS, help="Worker processes"),
    seed: int = typer.Option(0, help="Dataset seed"),
) -> None:
    """Labels training circuits with a feeding router."""
    graph = _arch(arch)
    with _exit_codes():
        spec = LabelerSpec(kind=labeler, depth=depth, n_bp=n_bp, sim_depth=sim_depth)  # type: ignore[arg-type]
        layers = n_l if n_l is not None else (5 if labeler == "mcts" else 3)
        inputs = [c for _, c in load_qasm_corpus(circuits)]
        manifest = run_label_farm(inputs, graph, spec, out, layers, workers=workers, seed=seed)
    typer.echo(f"Labeled {manifest.sample_count}/{manifest.n_c} circuits into {out} ({len(manifest.failures)} failed)")


@app.command("train")
def train_cmd(
    dataset: Path = typer.Argument(..., help="Dataset directory written by gen-labels"),
    out: Path = typer.Argument(..., help="Model output file"),
    arch: str = typer.Option(..., help="Architecture graph the dataset was labeled on"),
    hidden: Optional[List[int]] = typer.Option(None, help="Hidden layer width (repeatable)"),
    learning_rate: Optional[float] = typer.Option(None, help="Adam learning rate"),
    batch_size: Optional[int] = typer.Option(None, help="Mini-batch size"),
    epochs: Optional[int] = typer.Option(None, help="Training epochs"),
    validation_fraction: Optional[float] = typer.Option(None, help="Held-out fraction"),
    seed: int = typer.Option(0, help="Initialization and shuffling seed"),
) -> None:
    """Trains a policy model on a labeled dataset."""
    graph = _arch(arch)
    with _exit_codes():
        manifest, samples = load_dataset(dataset)
        if manifest.edge_sha != graph.edge_sha:
            raise ModelMismatchError(f"dataset was labeled on {manifest.arch_name}, not {graph.name}")
        hyper = TrainHyper.from_settings(
            hidden=tuple(hidden) if hidden else None,
            learning_rate=learning_rate,
            batch_size=batch_size,
            epochs=epochs,
            validation_fraction=validation_fraction,
        )
        model, report = train(samples, graph, manifest.n_l, hyper, seed=seed)
        store.save(model, out)
    val = f", val loss {report.val_loss[-1]:.6f}" if report.val_loss else ""
    typer.echo(f"Saved model to {out}: train loss {report.train_loss[-1]:.6f}{val}, best epoch {report.best_epoch}")


@app.command()
def compare(
    config: Optional[Path] = typer.Option(None, help="TOML or JSON bench config; flags below override it"),
    arch: Optional[str] = typer.Option(None, help="Architecture graph"),
    router: Optional[List[str]] = typer.Option(None, help="Router name (repeatable)"),
    model: Optional[Path] = typer.Option(None, help="Model used by every ANN router"),
    n_l_sweep: Optional[List[Path]] = typer.Option(None, help="Route ANN routers once per model (repeatable)"),
    depth: Optional[int] = typer.Option(None, help="Look-ahead search depth"),
    pruning_ratio: float = typer.Option(0.0, help="Pruning ratio for sahs-ann / mcts-ann"),
    n_bp: Optional[int] = typer.Option(None, help="MCTS iterations per decision"),
    sim_depth: Optional[int] = typer.Option(None, help="MCTS rollout length"),
    corpus: Optional[Path] = typer.Option(None, help="QASM corpus directory"),
    num_circuits: int = typer.Option(10, help="Random circuits (per gate count)"),
    num_gates: int = typer.Option(200, help="CNOTs per random circuit"),
    gate_counts: Optional[List[int]] = typer.Option(None, help="Gate-count series (repeatable)"),
    seed: int = typer.Option(0, help="First seed"),
    runs: int = typer.Option(5, help="Best-of-k runs for stochastic routers"),
    baseline: str = typer.Option("base", help="Router label used for gate-count reduction"),
    workers: Optional[int] = typer.Option(None, help="Worker processes (default: WORKERS setting)"),
    out: Optional[Path] = typer.Option(None, help="Output directory (default: bench-out)"),
    no_charts: bool = typer.Option(False, help="Skip SVG charts"),
) -> None:
    """Compares routers on random or corpus circuits and writes CSV reports."""
    with _exit_codes():
        if config:
            cfg = BenchConfig.from_file(config, arch=arch, out_dir=str(out) if out else None, workers=workers)
        else:
            if not arch or not router:
                typer.echo("Error: --arch and at least one --router are required without --config", err=True)
                raise typer.Exit(code=EXIT_USAGE)
            specs: List[RouterSpec] = []
            for name in router:
                sweep = n_l_sweep if router_registry.get(name).needs_model and n_l_sweep else []
                for path in sweep or [model]:
                    specs.append(RouterSpec(
                        name=name,
                        label=f"{name}-{path.stem}" if sweep and path else None,
                        model=str(path) if path else None,
                        depth=depth if name.startswith("sahs") else None,
                        pruning_ratio=pruning_ratio if name in ("sahs-ann", "mcts-ann") else 0.0,
                        n_bp=n_bp if name.startswith("mcts") else None,
                        sim_depth=sim_depth if name.startswith("mcts") else None,
                    ))
            cfg = BenchConfig(
                arch=arch,
                routers=specs,
                circuits=CircuitSource(
                    corpus=str(corpus) if corpus else None,
                    num_circuits=num_circuits,
                    num_gates=num_gates,
                    gate_counts=gate_counts or None,
                    seed=seed,
                ),
                seeds=list(range(seed, seed + max(runs, 1))),
                baseline=baseline,
                out_dir=str(out or "bench-out"),
                workers=workers or settings.WORKERS,
                charts=not no_charts,
            )
        report = run_compare(cfg)

    typer.echo(format_summary(report.summary))
    typer.echo(f"Reports written to {cfg.out_dir}")
    if report.errors:
        for err in report.errors:
            typer.echo(f"Verification failed: {err}", err=True)
        raise typer.Exit(code=EXIT_VERIFICATION)


@app.command("labelgen-timing")
def labelgen_timing_cmd(
    arch: Optional[List[str]] = typer.Option(None, help="Architecture (repeatable); default grids 2x2 to 5x5"),
    n_samples: int = typer.Option(20, help="Circuits labeled per architecture"),
    depth: int = typer.Option(2, help="Look-ahead depth of the labeler"),
    seed: int = typer.Option(0, help="Circuit seed"),
    out: Path = typer.Option(Path("labelgen-timing"), help="Output directory"),
    no_charts: bool = typer.Option(False, help="Skip the log-log chart"),
) -> None:
    """Measures how label generation time grows with the number of qubits."""
    graphs = [_arch(a) for a in (arch or list(DEFAULT_TIMING_ARCHS))]
    with _exit_codes():
        report = labelgen_timing(graphs, n_samples, depth=depth, seed=seed)
        out.mkdir(parents=True, exist_ok=True)
        write_rows(report.rows(), ["arch", "num_nodes", "seconds_per_label"], out / "timing.csv")
        if not no_charts:
            charts.loglog_chart(report.sizes, report.seconds_per_label, report.slope, report.intercept,
                                out / "timing.svg")
    for row in report.rows():
        typer.echo(f"{row['arch']:<16} |V|={row['num_nodes']:<4} {row['seconds_per_label']:.5f}s/label")
    typer.echo(f"Fitted exponent: {report.slope:.2f}")


@app.command("inspect-model")
def inspect_model(path: Path = typer.Argument(..., help="Model file")) -> None:
    """Prints a model's metadata header."""
    with _exit_codes():
        model = store.load(path)
    typer.echo(json.dumps(model.header.model_dump(mode="json"), indent=2))


if __name__ == "__main__":
    app()
