"""
Fully-connected policy network mapping a circuit encoding to a probability
distribution over the architecture's edges (canonical order).

Hidden layers use ReLU, the output a softmax. The final layer starts at zero
so a fresh model recommends every edge with probability 1/|E|.
"""
from typing import TYPE_CHECKING, List, Optional, Sequence, Tuple

import numpy as np

from qctlearn.arch.graph import ArchGraph
from qctlearn.circuit.ir import Gate
from qctlearn.exceptions import ModelMismatchError
from qctlearn.models import ModelHeader
from qctlearn.policy.encoding import encode_gates

if TYPE_CHECKING:
    from qctlearn.routing.mapping import Mapping

FORMAT_VERSION = 1


def softmax(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def mse_loss(pred: np.ndarray, label: np.ndarray) -> float:
    """Mean of squared coordinate differences (over samples and edges)."""
    pred, label = np.asarray(pred, dtype=np.float64), np.asarray(label, dtype=np.float64)
    if pred.shape != label.shape:
        raise ValueError(f"prediction shape {pred.shape} does not match label shape {label.shape}")
    return float(np.mean((pred - label) ** 2))


def loss_gradient(pred: np.ndarray, label: np.ndarray) -> np.ndarray:
    """
    Gradient of `mse_loss` with respect to the softmax logits: the output
    gradient ``2 (pred - label) / size`` pulled back through the softmax
    Jacobian, ``p * (g - <g, p>)`` row-wise.
    """
    pred, label = np.asarray(pred, dtype=np.float64), np.asarray(label, dtype=np.float64)
    if pred.shape != label.shape:
        raise ValueError(f"prediction shape {pred.shape} does not match label shape {label.shape}")
    g = 2.0 * (pred - label) / pred.size
    return pred * (g - np.sum(g * pred, axis=-1, keepdims=True))


class PolicyModel:
    """
    Weights, biases and the metadata binding them to one architecture graph.

    Attributes:
        header (ModelHeader): arch name, edge list and its hash, n_q, n_l, layer sizes.
        weights (List[np.ndarray]): ``(fan_in, fan_out)`` float64 matrices.
        biases (List[np.ndarray]): ``(fan_out,)`` float64 vectors.
    """

    def __init__(self, header: ModelHeader, weights: List[np.ndarray], biases: List[np.ndarray]):
        dims = header.layer_dims
        if len(weights) != len(dims) - 1 or len(biases) != len(dims) - 1:
            raise ModelMismatchError(f"{len(weights)} weight layers for layer sizes {dims}")
        for i, (w, b) in enumerate(zip(weights, biases)):
            if w.shape != (dims[i], dims[i + 1]) or b.shape != (dims[i + 1],):
                raise ModelMismatchError(
                    f"layer {i} has shapes {w.shape}/{b.shape}, expected ({dims[i]}, {dims[i + 1]})"
                )
        self.header = header
        self.weights = [np.asarray(w, dtype=np.float64) for w in weights]
        self.biases = [np.asarray(b, dtype=np.float64) for b in biases]

    @classmethod
    def initialize(
        cls, graph: ArchGraph, n_l: int, hidden: Sequence[int] = (512, 256), seed: int = 0
    ) -> "PolicyModel":
        """He-initialized hidden layers from a seeded generator, zero final layer."""
        n_q = graph.num_nodes
        dims = [n_l * n_q * n_q, *hidden, graph.num_edges]
        header = ModelHeader(
            format_version=FORMAT_VERSION,
            arch_name=graph.name,
            edge_list_sha=graph.edge_sha,
            n_q=n_q,
            n_l=n_l,
            num_edges=graph.num_edges,
            edges=list(graph.edges),
            layer_dims=dims,
        )
        rng = np.random.default_rng(seed)
        weights, biases = [], []
        for i in range(len(dims) - 1):
            fan_in, fan_out = dims[i], dims[i + 1]
            if i == len(dims) - 2:
                weights.append(np.zeros((fan_in, fan_out)))
            else:
                weights.append(rng.normal(0.0, np.sqrt(2.0 / fan_in), size=(fan_in, fan_out)))
            biases.append(np.zeros(fan_out))
        return cls(header, weights, biases)

    @property
    def n_l(self) -> int:
        return self.header.n_l

    @property
    def n_q(self) -> int:
        return self.header.n_q

    @property
    def num_edges(self) -> int:
        return self.header.num_edges

    @property
    def input_dim(self) -> int:
        return self.header.layer_dims[0]

    def parameters(self) -> List[np.ndarray]:
        """Weights and biases interleaved: ``[W0, b0, W1, b1, ...]``. Updated in place by training."""
        out: List[np.ndarray] = []
        for w, b in zip(self.weights, self.biases):
            out.extend((w, b))
        return out

    def _propagate(self, x: np.ndarray) -> Tuple[np.ndarray, List[np.ndarray]]:
        acts = [x]
        h = x
        last = len(self.weights) - 1
        z = x
        for i, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = h @ w + b
            if i < last:
                h = np.maximum(z, 0.0)
                acts.append(h)
        return softmax(z), acts

    def _as_batch(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        if x.ndim == 1:
            x = x[None, :]
        if x.ndim != 2 or x.shape[1] != self.input_dim:
            raise ModelMismatchError(
                f"encoding of size {x.shape[-1]} does not match model input {self.input_dim}"
            )
        return x

    def forward(self, x: np.ndarray) -> np.ndarray:
        """Probability vector over edges; a 2-D input gives one row per sample."""
        single = np.ndim(x) == 1
        probs, _ = self._propagate(self._as_batch(x))
        return probs[0] if single else probs

    def predict_batch(self, xs: np.ndarray) -> np.ndarray:
        probs, _ = self._propagate(self._as_batch(xs))
        return probs

    def gradients(self, x: np.ndarray, y: np.ndarray) -> Tuple[float, List[np.ndarray]]:
        """MSE loss on a batch and its gradients, ordered like `parameters()`."""
        x = self._as_batch(x)
        y = np.asarray(y, dtype=np.float64).reshape(x.shape[0], -1)
        probs, acts = self._propagate(x)
        loss = mse_loss(probs, y)
        dz = loss_gradient(probs, y)
        grads: List[np.ndarray] = [np.empty(0)] * (2 * len(self.weights))
        for i in range(len(self.weights) - 1, -1, -1):
            grads[2 * i] = acts[i].T @ dz
            grads[2 * i + 1] = dz.sum(axis=0)
            if i > 0:
                dz = (dz @ self.weights[i].T) * (acts[i] > 0)
        return loss, grads

    def recommend(self, gates: Sequence[Gate], mapping: "Mapping") -> np.ndarray:
        """Recommendation distribution for the next `n_l` layers of `gates` under `mapping`."""
        return self.forward(encode_gates(gates, mapping.l2p, self.n_l, self.n_q))

    def check_compatible(self, graph: ArchGraph, n_l: Optional[int] = None) -> None:
        """
        Raises:
            ModelMismatchError: when the model was trained for another graph
                (name, qubit count or edge list) or another layer count.
        """
        h = self.header
        if h.n_q != graph.num_nodes or h.edge_list_sha != graph.edge_sha:
            raise ModelMismatchError(
                f"model was trained for {h.arch_name} ({h.n_q} qubits, {h.num_edges} edges), "
                f"not {graph.name} ({graph.num_nodes} qubits, {graph.num_edges} edges)"
            )
        if h.arch_name != graph.name:
            raise ModelMismatchError(f"model architecture {h.arch_name!r} does not match {graph.name!r}")
        if n_l is not None and h.n_l != n_l:
            raise ModelMismatchError(f"model encodes {h.n_l} layers, {n_l} requested")

    def __repr__(self) -> str:
        return f"PolicyModel(arch={self.header.arch_name!r}, n_l={self.n_l}, dims={self.header.layer_dims})"
