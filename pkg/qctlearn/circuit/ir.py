import random
from dataclasses import dataclass, field
from enum import Enum
from typing import FrozenSet, Iterable, List, Sequence, Tuple

from qctlearn.exceptions import CircuitError


class GateKind(str, Enum):
    CNOT = "cx"
    SWAP = "swap"


@dataclass(frozen=True, slots=True)
class Gate:
    """
    A two-qubit gate.

    For CNOT, q0 is the control and q1 the target. Routing ignores the
    direction; it is only kept so that output circuits read back the same.
    """
    kind: GateKind
    q0: int
    q1: int

    def __post_init__(self) -> None:
        if self.q0 == self.q1:
            raise CircuitError(f"{self.kind.value} acts twice on qubit {self.q0}")
        if self.q0 < 0 or self.q1 < 0:
            raise CircuitError(f"negative qubit index in {self.kind.value}({self.q0},{self.q1})")

    @property
    def qubits(self) -> Tuple[int, int]:
        return (self.q0, self.q1)

    @classmethod
    def cnot(cls, control: int, target: int) -> "Gate":
        return cls(GateKind.CNOT, control, target)

    @classmethod
    def swap(cls, a: int, b: int) -> "Gate":
        return cls(GateKind.SWAP, a, b)


@dataclass(frozen=True)
class LayerDecomposition:
    """ASAP layers as ordered tuples of gate indices."""
    layers: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.layers)

    def __getitem__(self, k: int) -> Tuple[int, ...]:
        return self.layers[k]

    def flatten(self) -> List[int]:
        return [i for layer in self.layers for i in layer]


@dataclass(frozen=True)
class DependencyDag:
    """Per-gate predecessor sets: g precedes h iff they share a qubit and g comes first."""
    predecessors: Tuple[FrozenSet[int], ...]

    def is_linearization(self, order: Sequence[int]) -> bool:
        seen = set()
        for idx in order:
            if idx in seen or not self.predecessors[idx] <= seen:
                return False
            seen.add(idx)
        return len(seen) == len(self.predecessors)


@dataclass(frozen=True)
class Circuit:
    """
    Immutable two-qubit-gate circuit over `num_qubits` qubits.

    Attributes:
        num_qubits (int): Number of qubits (logical or physical).
        gates (Tuple[Gate, ...]): Gates in program order.
    """
    num_qubits: int
    gates: Tuple[Gate, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if self.num_qubits < 0:
            raise CircuitError("num_qubits must be non-negative")
        if not isinstance(self.gates, tuple):
            object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if g.q0 >= self.num_qubits or g.q1 >= self.num_qubits:
                raise CircuitError(
                    f"qubit index out of range in {g.kind.value}({g.q0},{g.q1}) "
                    f"for a {self.num_qubits}-qubit circuit"
                )

    @classmethod
    def from_pairs(cls, num_qubits: int, pairs: Iterable[Tuple[int, int]]) -> "Circuit":
        """Builds a CNOT-only circuit from (control, target) pairs."""
        return cls(num_qubits, tuple(Gate.cnot(a, b) for a, b in pairs))

    def __len__(self) -> int:
        return len(self.gates)

    @property
    def swap_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.SWAP)

    @property
    def cnot_count(self) -> int:
        return sum(1 for g in self.gates if g.kind is GateKind.CNOT)

    def is_cnot_only(self) -> bool:
        return all(g.kind is GateKind.CNOT for g in self.gates)

    def pairs(self) -> List[Tuple[int, int]]:
        return [g.qubits for g in self.gates]

    def subcircuit(self, indices: Iterable[int]) -> "Circuit":
        """Gates at `indices` (kept in the given order) on the same qubit register."""
        return Circuit(self.num_qubits, tuple(self.gates[i] for i in indices))

    def layers(self) -> LayerDecomposition:
        return layers(self)

    def depth(self) -> int:
        return max(layer_indices(self.gates), default=-1) + 1


def layer_indices(gates: Sequence[Gate]) -> List[int]:
    """ASAP layer number of every gate."""
    last: dict = {}
    out: List[int] = []
    for g in gates:
        k = max(last.get(g.q0, -1), last.get(g.q1, -1)) + 1
        last[g.q0] = k
        last[g.q1] = k
        out.append(k)
    return out


def group_layers(gates: Sequence[Gate]) -> List[List[int]]:
    """Gate indices grouped by ASAP layer, program order within a layer."""
    grouped: List[List[int]] = []
    for idx, k in enumerate(layer_indices(gates)):
        if k == len(grouped):
            grouped.append([])
        grouped[k].append(idx)
    return grouped


def layers(c: Circuit) -> LayerDecomposition:
    """ASAP layering: every gate sits in the earliest layer its qubit predecessors allow."""
    return LayerDecomposition(tuple(tuple(layer) for layer in group_layers(c.gates)))


def front_layer(c: Circuit) -> FrozenSet[int]:
    """Indices of gates with no predecessor (layer 0)."""
    blocked: set = set()
    front = set()
    for idx, g in enumerate(c.gates):
        if g.q0 not in blocked and g.q1 not in blocked:
            front.add(idx)
        blocked.add(g.q0)
        blocked.add(g.q1)
    return frozenset(front)


def dependency_dag(c: Circuit) -> DependencyDag:
    """Predecessor sets: every earlier gate that shares a qubit."""
    on_qubit: dict = {}
    preds: List[FrozenSet[int]] = []
    for idx, g in enumerate(c.gates):
        preds.append(frozenset(on_qubit.get(g.q0, ())) | frozenset(on_qubit.get(g.q1, ())))
        on_qubit.setdefault(g.q0, []).append(idx)
        on_qubit.setdefault(g.q1, []).append(idx)
    return DependencyDag(tuple(preds))


def random_circuit(n_q: int, n_gates: int, seed: int) -> Circuit:
    """
    `n_gates` CNOTs on uniformly random distinct qubit pairs.

    Control/target order is also random. Deterministic for a given seed.
    """
    if n_q < 2:
        raise CircuitError("random circuits need at least 2 qubits")
    rng = random.Random(seed)
    gates = tuple(Gate.cnot(*rng.sample(range(n_q), 2)) for _ in range(n_gates))
    return Circuit(n_q, gates)
