"""
Parallel label farm and the on-disk dataset format.

A dataset directory holds ``manifest.json`` (a `DatasetManifest`) and one or
more JSONL sample files, one `SampleRecord` per line. Samples are written in
circuit-index order whatever the worker count, so the files depend only on
the inputs and the seed.
"""
import base64
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from joblib import Parallel, delayed
from pydantic import ValidationError

from qctlearn.arch.graph import ArchGraph
from qctlearn.circuit.ir import Circuit
from qctlearn.datagen.labels import label_circuit
from qctlearn.exceptions import DatasetError
from qctlearn.models import DatasetManifest, LabelerSpec, LabelFailure, SampleRecord
from qctlearn.policy.encoding import encode
from qctlearn.policy.train import TrainingSample
from qctlearn.routing.mapping import Mapping
from qctlearn.telemetry import TelemetryManager
from qctlearn.utils.logging import bind_context, get_logger, reset_context

logger = get_logger("LabelFarm")

MANIFEST = "manifest.json"
SAMPLES = "samples.jsonl"

LabelOutcome = Tuple[int, Optional[List[float]], Optional[str]]


def circuit_seed(seed: int, index: int) -> int:
    """Per-circuit seed derived from (seed, index), independent of scheduling."""
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def pack_encoding(x: np.ndarray) -> str:
    return base64.b64encode(np.packbits(np.asarray(x, dtype=np.uint8)).tobytes()).decode("ascii")


def unpack_encoding(s: str, size: int) -> np.ndarray:
    raw = np.frombuffer(base64.b64decode(s), dtype=np.uint8)
    if raw.size * 8 < size:
        raise DatasetError(f"encoding holds {raw.size * 8} bits, expected {size}")
    return np.unpackbits(raw, count=size)


def _label_one(index: int, c: Circuit, g: ArchGraph, spec: LabelerSpec, seed: int) -> LabelOutcome:
    token = bind_context(circuit=index, labeler=spec.kind)
    try:
        with TelemetryManager().traced("label_circuit", labeler=spec.kind, circuit=index, arch=g.name):
            label = label_circuit(c, g, spec, circuit_seed(seed, index))
        return index, [float(v) for v in label], None
    except Exception as e:
        return index, None, f"{type(e).__name__}: {e}"
    finally:
        reset_context(token)


def run_label_farm(
    circuits: Sequence[Circuit],
    graph: ArchGraph,
    spec: LabelerSpec,
    out_dir: Union[str, Path],
    n_l: int,
    workers: int = 1,
    seed: int = 0,
    progress_every: int = 100,
) -> DatasetManifest:
    """
    Labels every circuit on a joblib worker pool and writes the dataset.

    A failing circuit is recorded in ``manifest.failures`` and the job goes on.
    """
    if workers < 1:
        raise ValueError("workers must be >= 1")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    naive = Mapping.naive(graph.num_nodes)
    telemetry = TelemetryManager()

    outcomes = Parallel(n_jobs=workers, backend="loky", return_as="generator")(
        delayed(_label_one)(i, c, graph, spec, seed) for i, c in enumerate(circuits)
    )

    records: List[SampleRecord] = []
    failures: List[LabelFailure] = []
    for done, (index, label, error) in enumerate(outcomes, start=1):
        c = circuits[index]
        if error is None and label is not None:
            records.append(SampleRecord(
                index=index,
                encoding=pack_encoding(encode(c, naive, n_l, graph.num_nodes)),
                label=label,
                gates=c.pairs(),
            ))
            telemetry.metrics.labels_generated.labels(labeler=spec.kind, status="ok").inc()
        else:
            failures.append(LabelFailure(index=index, error=error or "no label"))
            telemetry.metrics.labels_generated.labels(labeler=spec.kind, status="error").inc()
            logger.warning(f"Labeling circuit {index} failed: {error}")
        if progress_every and done % progress_every == 0:
            logger.info(f"Labeled {done}/{len(circuits)} circuits ({len(failures)} failed)")

    manifest = DatasetManifest(
        arch_name=graph.name,
        edge_sha=graph.edge_sha,
        num_nodes=graph.num_nodes,
        num_edges=graph.num_edges,
        n_l=n_l,
        n_c=len(circuits),
        generator=spec.kind,
        generator_params=spec.model_dump(exclude={"kind"}),
        seed=seed,
        sample_files=[SAMPLES],
        sample_count=len(records),
        failures=failures,
    )
    write_dataset(out, manifest, records)
    logger.info(f"Dataset written to {out}: {len(records)} samples, {len(failures)} failures")
    return manifest


def write_dataset(out_dir: Union[str, Path], manifest: DatasetManifest, records: Iterable[SampleRecord]) -> Path:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    with open(out / manifest.sample_files[0], "w", encoding="utf-8", newline="\n") as f:
        for r in records:
            f.write(r.model_dump_json())
            f.write("\n")
    (out / MANIFEST).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")
    return out


def load_dataset(directory: Union[str, Path]) -> Tuple[DatasetManifest, List[TrainingSample]]:
    """
    Reads a dataset directory back into training samples.

    Raises:
        DatasetError: missing/invalid manifest or samples that disagree with it.
    """
    root = Path(directory)
    try:
        manifest = DatasetManifest.model_validate_json((root / MANIFEST).read_text(encoding="utf-8"))
    except FileNotFoundError:
        raise DatasetError(f"no {MANIFEST} in {root}") from None
    except ValidationError as e:
        raise DatasetError(f"invalid manifest in {root}: {e}") from e

    samples: List[TrainingSample] = []
    for name in manifest.sample_files:
        path = root / name
        if not path.exists():
            raise DatasetError(f"sample file {path} listed in the manifest is missing")
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                if not line.strip():
                    continue
                try:
                    rec = SampleRecord.model_validate_json(line)
                except ValidationError as e:
                    raise DatasetError(f"{path}:{lineno}: {e}") from e
                if len(rec.label) != manifest.num_edges:
                    raise DatasetError(
                        f"{path}:{lineno}: label has {len(rec.label)} entries, manifest says {manifest.num_edges}"
                    )
                try:
                    x = unpack_encoding(rec.encoding, manifest.input_dim)
                except (DatasetError, ValueError) as e:
                    raise DatasetError(f"{path}:{lineno}: {e}") from e
                samples.append(TrainingSample(encoding=x, label=np.asarray(rec.label, dtype=np.float64)))
    logger.info(f"Loaded {len(samples)} samples from {root}")
    return manifest, samples
