from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from qctlearn.arch.graph import ArchGraph
from qctlearn.exceptions import DatasetError
from qctlearn.policy.network import PolicyModel, mse_loss
from qctlearn.policy.optim import AdamState, adam_step
from qctlearn.settings import settings
from qctlearn.telemetry import TelemetryManager
from qctlearn.utils.logging import get_logger

logger = get_logger("Trainer")


@dataclass
class TrainingSample:
    """An encoding vector and its recommendation distribution (the label)."""
    encoding: np.ndarray
    label: np.ndarray


@dataclass(frozen=True)
class TrainHyper:
    hidden: Tuple[int, ...] = (512, 256)
    learning_rate: float = 1e-3
    batch_size: int = 64
    epochs: int = 50
    validation_fraction: float = 0.1

    def __post_init__(self) -> None:
        if self.batch_size < 1 or self.epochs < 1:
            raise ValueError("batch_size and epochs must be positive")
        if not (0.0 <= self.validation_fraction < 1.0):
            raise ValueError("validation_fraction must lie in [0, 1)")

    @classmethod
    def from_settings(cls, **overrides: object) -> "TrainHyper":
        t = settings.training
        values = dict(
            hidden=tuple(t.HIDDEN),
            learning_rate=t.LEARNING_RATE,
            batch_size=t.BATCH_SIZE,
            epochs=t.EPOCHS,
            validation_fraction=t.VALIDATION_FRACTION,
        )
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)  # type: ignore[arg-type]


@dataclass
class TrainingReport:
    """Per-epoch losses. `initial_val_loss` is the untrained model's validation loss."""
    train_loss: List[float] = field(default_factory=list)
    val_loss: List[float] = field(default_factory=list)
    best_epoch: int = 0
    initial_val_loss: Optional[float] = None
    train_size: int = 0
    val_size: int = 0


def stack_samples(samples: Sequence[TrainingSample], input_dim: int, num_edges: int) -> Tuple[np.ndarray, np.ndarray]:
    if not samples:
        raise DatasetError("cannot train on an empty dataset")
    for i, s in enumerate(samples):
        if np.size(s.encoding) != input_dim or np.size(s.label) != num_edges:
            raise DatasetError(
                f"sample {i} has shape ({np.size(s.encoding)}, {np.size(s.label)}), "
                f"expected ({input_dim}, {num_edges})"
            )
    x = np.stack([np.asarray(s.encoding, dtype=np.float64).reshape(-1) for s in samples])
    y = np.stack([np.asarray(s.label, dtype=np.float64).reshape(-1) for s in samples])
    return x, y


def train(
    samples: Sequence[TrainingSample],
    graph: ArchGraph,
    n_l: int,
    hyper: Optional[TrainHyper] = None,
    seed: int = 0,
) -> Tuple[PolicyModel, TrainingReport]:
    """
    Mini-batch MSE + Adam training. The validation split and every epoch's
    shuffle come from one generator seeded by `seed`, so equal seeds give
    identical loss curves.

    Raises:
        DatasetError: empty or heterogeneous samples.
    """
    hyper = hyper or TrainHyper.from_settings()
    model = PolicyModel.initialize(graph, n_l, hyper.hidden, seed=seed)
    x, y = stack_samples(samples, model.input_dim, model.num_edges)

    rng = np.random.default_rng([seed, 1])
    n = len(x)
    n_val = int(n * hyper.validation_fraction)
    if n - n_val < 1:
        n_val = 0
    perm = rng.permutation(n)
    val_idx, train_idx = perm[:n_val], perm[n_val:]

    report = TrainingReport(train_size=len(train_idx), val_size=n_val)
    if n_val:
        report.initial_val_loss = mse_loss(model.predict_batch(x[val_idx]), y[val_idx])

    state = AdamState(lr=hyper.learning_rate)
    params = model.parameters()
    telemetry = TelemetryManager()
    logger.info(
        f"Training on {len(train_idx)} samples ({n_val} held out), "
        f"layers {model.header.layer_dims}, {hyper.epochs} epochs"
    )
    for epoch in range(hyper.epochs):
        order = rng.permutation(train_idx)
        for start in range(0, len(order), hyper.batch_size):
            batch = order[start:start + hyper.batch_size]
            _, grads = model.gradients(x[batch], y[batch])
            adam_step(params, grads, state)

        report.train_loss.append(mse_loss(model.predict_batch(x[train_idx]), y[train_idx]))
        if n_val:
            report.val_loss.append(mse_loss(model.predict_batch(x[val_idx]), y[val_idx]))
        telemetry.metrics.training_epochs.inc()
        logger.debug(
            f"epoch {epoch + 1}: train {report.train_loss[-1]:.6f}"
            + (f" val {report.val_loss[-1]:.6f}" if n_val else "")
        )

    curve = report.val_loss or report.train_loss
    report.best_epoch = int(np.argmin(curve)) + 1
    logger.info(f"Training done: final train loss {report.train_loss[-1]:.6f}, best epoch {report.best_epoch}")
    return model, report
