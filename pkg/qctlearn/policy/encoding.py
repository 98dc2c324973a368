"""
0-1 encoding of a circuit's leading layers.

The vector is ``n_l`` symmetric ``n_q x n_q`` matrices, flattened row-major
and concatenated. Entry ``(k, i, j)`` is 1 when layer k holds a CNOT whose
operands sit on physical qubits i and j under the current mapping. Circuits
with fewer than ``n_l`` layers are zero-padded.
"""
from typing import TYPE_CHECKING, Sequence

import numpy as np

from qctlearn.circuit.ir import Circuit, Gate
from qctlearn.exceptions import CircuitError
from qctlearn.routing.core import leading_layers

if TYPE_CHECKING:
    from qctlearn.routing.mapping import Mapping


def encode_gates(gates: Sequence[Gate], l2p: Sequence[int], n_l: int, n_q: int) -> np.ndarray:
    """Encodes a gate sequence under the logical-to-physical table `l2p`."""
    out = np.zeros((n_l, n_q, n_q), dtype=np.uint8)
    for k, layer in enumerate(leading_layers(gates, n_l)):
        for g in layer:
            try:
                i, j = l2p[g.q0], l2p[g.q1]
            except IndexError:
                raise CircuitError(f"gate {g.qubits} uses a qubit the mapping does not cover") from None
            if not (0 <= i < n_q and 0 <= j < n_q):
                raise CircuitError(f"gate {g.qubits} maps to ({i},{j}), outside [0,{n_q})")
            out[k, i, j] = 1
            out[k, j, i] = 1
    return out.reshape(-1)


def encode(c: Circuit, tau: "Mapping", n_l: int, n_q: int) -> np.ndarray:
    """Encoding vector of length ``n_l * n_q * n_q`` (uint8)."""
    return encode_gates(c.gates, tau.l2p, n_l, n_q)


def encoding_matrices(x: np.ndarray, n_l: int, n_q: int) -> np.ndarray:
    """Inverse of the flattening: shape ``(n_l, n_q, n_q)``."""
    x = np.asarray(x)
    if x.size != n_l * n_q * n_q:
        raise CircuitError(f"encoding has {x.size} entries, expected {n_l * n_q * n_q}")
    return x.reshape(n_l, n_q, n_q)
