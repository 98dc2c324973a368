import numpy as np
import pytest

from qctlearn.exceptions import DatasetError
from qctlearn.policy.network import mse_loss, softmax
from qctlearn.policy.train import TrainHyper, TrainingSample, train


def _samples(n: int, dim: int, num_edges: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    return [
        TrainingSample(rng.integers(0, 2, size=dim).astype(np.uint8), softmax(rng.normal(size=num_edges)))
        for _ in range(n)
    ]


def test_hyper_validation():
    with pytest.raises(ValueError):
        TrainHyper(batch_size=0)
    with pytest.raises(ValueError):
        TrainHyper(validation_fraction=1.0)
    assert TrainHyper.from_settings(epochs=3, learning_rate=None).epochs == 3

def test_memorizes_small_dataset(grid2x3):
    samples = _samples(20, 36, 7)
    hyper = TrainHyper(hidden=(64,), learning_rate=1e-2, batch_size=20, epochs=500, validation_fraction=0.0)
    model, report = train(samples, grid2x3, n_l=1, hyper=hyper, seed=0)
    x = np.stack([s.encoding for s in samples])
    y = np.stack([s.label for s in samples])
    assert mse_loss(model.predict_batch(x), y) < 1e-3
    assert report.train_loss[-1] < report.train_loss[0]
    assert report.val_size == 0
    assert report.val_loss == []

def test_validation_split(grid2x3):
    samples = _samples(30, 36, 7)
    hyper = TrainHyper(hidden=(16,), learning_rate=1e-2, batch_size=8, epochs=5, validation_fraction=0.2)
    _, report = train(samples, grid2x3, n_l=1, hyper=hyper)
    assert (report.train_size, report.val_size) == (24, 6)
    assert len(report.val_loss) == 5
    assert report.initial_val_loss is not None
    assert 1 <= report.best_epoch <= 5

def test_training_is_deterministic(grid2x3):
    samples = _samples(16, 36, 7, seed=2)
    hyper = TrainHyper(hidden=(8,), learning_rate=1e-2, batch_size=4, epochs=4, validation_fraction=0.25)
    a, ra = train(samples, grid2x3, n_l=1, hyper=hyper, seed=9)
    b, rb = train(samples, grid2x3, n_l=1, hyper=hyper, seed=9)
    assert ra.train_loss == rb.train_loss
    assert ra.val_loss == rb.val_loss
    assert all(np.array_equal(p, q) for p, q in zip(a.parameters(), b.parameters()))

def test_rejects_bad_datasets(grid2x3):
    with pytest.raises(DatasetError):
        train([], grid2x3, n_l=1)
    bad = _samples(3, 36, 7) + [TrainingSample(np.zeros(20), np.ones(7) / 7)]
    with pytest.raises(DatasetError):
        train(bad, grid2x3, n_l=1, hyper=TrainHyper(hidden=(4,), epochs=1))
