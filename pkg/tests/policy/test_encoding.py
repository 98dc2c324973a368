import numpy as np
import pytest

from qctlearn.circuit.ir import Circuit
from qctlearn.exceptions import CircuitError
from qctlearn.policy.encoding import encode, encoding_matrices
from qctlearn.routing.mapping import Mapping


def test_fig6_encoding(fig6_circuit):
    x = encode(fig6_circuit, Mapping.naive(6), n_l=5, n_q=6)
    assert x.shape == (5 * 36,)
    assert x.dtype == np.uint8
    mats = encoding_matrices(x, 5, 6)
    for k, (a, b) in enumerate([(1, 5), (1, 2), (2, 4), (2, 3), (0, 2)]):
        assert mats[k, a, b] == 1 and mats[k, b, a] == 1
        assert mats[k].sum() == 2

def test_matrices_are_symmetric_with_zero_diagonal():
    c = Circuit.from_pairs(6, [(0, 1), (2, 3), (1, 2), (4, 5), (0, 5)])
    mats = encoding_matrices(encode(c, Mapping.naive(6), 3, 6), 3, 6)
    for m in mats:
        assert (m == m.T).all()
        assert not np.diag(m).any()

def test_direction_is_ignored():
    a = encode(Circuit.from_pairs(3, [(0, 2)]), Mapping.naive(3), 1, 3)
    b = encode(Circuit.from_pairs(3, [(2, 0)]), Mapping.naive(3), 1, 3)
    assert (a == b).all()

def test_short_circuits_are_zero_padded():
    x = encode(Circuit.from_pairs(4, [(0, 1)]), Mapping.naive(4), 3, 4)
    mats = encoding_matrices(x, 3, 4)
    assert mats[0].sum() == 2
    assert not mats[1:].any()

def test_only_leading_layers_are_encoded(fig6_circuit):
    x = encode(fig6_circuit, Mapping.naive(6), 2, 6)
    assert x.sum() == 4

def test_mapping_moves_entries(fig6_circuit):
    tau = Mapping([0, 3, 2, 1, 4, 5])
    mats = encoding_matrices(encode(fig6_circuit, tau, 1, 6), 1, 6)
    # logical (1,5) sits on physical (3,5)
    assert mats[0, 3, 5] == 1
    assert mats[0, 1, 5] == 0

def test_encoding_rejects_small_register(fig6_circuit):
    with pytest.raises(CircuitError):
        encode(fig6_circuit, Mapping.naive(6), 1, 4)
    with pytest.raises(CircuitError):
        encoding_matrices(np.zeros(10), 1, 3)
