"""
Training and evaluation circuits: random layered circuits sliced into
fixed-depth pieces, realistic-corpus slicing and train/test splits.
"""
import random
from pathlib import Path
from typing import List, Sequence, Tuple, TypeVar, Union

from qctlearn.circuit.ir import Circuit, Gate, layer_indices
from qctlearn.circuit.qasm import read_qasm
from qctlearn.exceptions import CircuitError
from qctlearn.utils.logging import get_logger

logger = get_logger("Circuits")

T = TypeVar("T")


def slice_layers(c: Circuit, n_l: int) -> List[Circuit]:
    """
    Cuts `c` at ASAP layer boundaries into pieces of `n_l` layers; the last
    piece may be shorter. Gates keep their program order.
    """
    if n_l < 1:
        raise ValueError(f"n_l must be >= 1, got {n_l}")
    buckets: List[List[Gate]] = []
    for g, k in zip(c.gates, layer_indices(c.gates)):
        piece = k // n_l
        while len(buckets) <= piece:
            buckets.append([])
        buckets[piece].append(g)
    return [Circuit(c.num_qubits, tuple(b)) for b in buckets]


def layered_random_circuit(n_q: int, depth: int, seed: int) -> Circuit:
    """Random CNOTs are added until the ASAP depth reaches exactly `depth`."""
    if n_q < 2:
        raise CircuitError("training circuits need at least 2 qubits")
    rng = random.Random(seed)
    level = [0] * n_q
    reached = 0
    gates: List[Gate] = []
    while reached < depth:
        a, b = rng.sample(range(n_q), 2)
        k = max(level[a], level[b]) + 1
        level[a] = level[b] = k
        reached = max(reached, k)
        gates.append(Gate.cnot(a, b))
    return Circuit(n_q, tuple(gates))


def gen_training_circuits(n_q: int, n_l: int, n_c: int, seed: int) -> List[Circuit]:
    """
    `n_c` circuits of exactly `n_l` layers each, obtained by slicing one
    random circuit of depth ``n_l * n_c``.
    """
    if n_l < 1 or n_c < 1:
        raise ValueError("n_l and n_c must be positive")
    parent = layered_random_circuit(n_q, n_l * n_c, seed)
    pieces = slice_layers(parent, n_l)
    logger.debug(f"Generated {len(pieces)} training circuits from {len(parent)} gates")
    return pieces


def slice_realistic_corpus(circuits: Sequence[Circuit], n_l: int) -> List[Circuit]:
    """Per-circuit layer slicing; short final slices are kept."""
    out: List[Circuit] = []
    for c in circuits:
        if not c.is_cnot_only():
            raise CircuitError("corpus circuits must be CNOT-only")
        out.extend(slice_layers(c, n_l))
    return out


def split_corpus(items: Sequence[T], test_size: int, seed: int) -> Tuple[List[T], List[T]]:
    """Seeded random hold-out of `test_size` items; both parts keep input order."""
    if not (0 <= test_size <= len(items)):
        raise ValueError(f"test_size {test_size} outside [0, {len(items)}]")
    held = set(random.Random(seed).sample(range(len(items)), test_size))
    train = [x for i, x in enumerate(items) if i not in held]
    test = [x for i, x in enumerate(items) if i in held]
    return train, test


def load_qasm_corpus(directory: Union[str, Path]) -> List[Tuple[str, Circuit]]:
    """Every ``*.qasm`` file of a directory (sorted by name), single-qubit gates dropped."""
    root = Path(directory)
    if not root.is_dir():
        raise CircuitError(f"corpus directory {root} does not exist")
    out = [(p.stem, read_qasm(p)) for p in sorted(root.glob("*.qasm"))]
    logger.info(f"Loaded {len(out)} circuits from {root}")
    return out
