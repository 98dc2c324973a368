import numpy as np
import pytest

from qctlearn.arch.graph import build_grid
from qctlearn.exceptions import ModelMismatchError
from qctlearn.policy.network import PolicyModel, loss_gradient, mse_loss, softmax
from qctlearn.routing.mapping import Mapping


def test_softmax_is_a_distribution():
    p = softmax(np.array([1000.0, 1000.0, -1000.0]))
    assert np.isfinite(p).all()
    assert p.sum() == pytest.approx(1.0)
    assert p[0] == pytest.approx(0.5)

def test_fresh_model_is_uniform(grid2x3, fig6_circuit):
    model = PolicyModel.initialize(grid2x3, n_l=3, hidden=(32, 16), seed=4)
    assert model.header.layer_dims == [108, 32, 16, 7]
    probs = model.recommend(fig6_circuit.gates, Mapping.naive(6))
    assert probs.shape == (7,)
    assert np.allclose(probs, 1 / 7)

def test_batch_forward(random_model):
    xs = np.random.default_rng(0).integers(0, 2, size=(5, random_model.input_dim))
    probs = random_model.predict_batch(xs)
    assert probs.shape == (5, 7)
    assert np.allclose(probs.sum(axis=1), 1.0)
    assert np.allclose(random_model.forward(xs[2]), probs[2])

def test_initialization_is_seeded(grid2x3):
    a = PolicyModel.initialize(grid2x3, n_l=2, hidden=(8,), seed=3)
    b = PolicyModel.initialize(grid2x3, n_l=2, hidden=(8,), seed=3)
    c = PolicyModel.initialize(grid2x3, n_l=2, hidden=(8,), seed=4)
    assert all((x == y).all() for x, y in zip(a.parameters(), b.parameters()))
    assert not (a.weights[0] == c.weights[0]).all()

def test_mse_loss():
    assert mse_loss([0.5, 0.5], [1.0, 0.0]) == pytest.approx(0.25)
    with pytest.raises(ValueError):
        mse_loss([0.5, 0.5], [1.0, 0.0, 0.0])
    with pytest.raises(ValueError):
        loss_gradient(np.ones((2, 3)), np.ones((3, 2)))

# --- Backpropagation ---

def test_gradients_match_central_differences(triangle):
    model = PolicyModel.initialize(triangle, n_l=2, hidden=(5,), seed=0)
    rng = np.random.default_rng(11)
    model.weights[-1][...] = rng.normal(size=model.weights[-1].shape)
    model.biases[0][...] = 0.1
    x = rng.integers(0, 2, size=(4, model.input_dim)).astype(np.float64)
    y = softmax(rng.normal(size=(4, model.num_edges)))

    _, grads = model.gradients(x, y)
    h = 1e-5
    for param, grad in zip(model.parameters(), grads):
        numeric = np.zeros_like(param)
        for idx in np.ndindex(param.shape):
            saved = param[idx]
            param[idx] = saved + h
            up = mse_loss(model.predict_batch(x), y)
            param[idx] = saved - h
            down = mse_loss(model.predict_batch(x), y)
            param[idx] = saved
            numeric[idx] = (up - down) / (2 * h)
        assert np.allclose(grad, numeric, rtol=1e-4, atol=1e-9)

# --- Compatibility ---

def test_wrong_input_size(random_model):
    with pytest.raises(ModelMismatchError):
        random_model.forward(np.zeros(10))

def test_check_compatible(random_model, grid2x3):
    random_model.check_compatible(grid2x3, n_l=3)
    with pytest.raises(ModelMismatchError):
        random_model.check_compatible(build_grid(2, 2))
    with pytest.raises(ModelMismatchError):
        random_model.check_compatible(grid2x3, n_l=4)

def test_shape_mismatch_on_construction(random_model):
    weights = [w.copy() for w in random_model.weights]
    weights[0] = weights[0][:, :3]
    with pytest.raises(ModelMismatchError):
        PolicyModel(random_model.header, weights, random_model.biases)
