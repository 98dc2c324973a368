from qctlearn.circuit.ir import (
    Circuit,
    DependencyDag,
    Gate,
    GateKind,
    LayerDecomposition,
    dependency_dag,
    front_layer,
    layers,
    random_circuit,
)
from qctlearn.circuit.qasm import emit_qasm, parse_qasm, read_qasm, write_qasm

__all__ = [
    "Circuit",
    "DependencyDag",
    "Gate",
    "GateKind",
    "LayerDecomposition",
    "dependency_dag",
    "front_layer",
    "layers",
    "random_circuit",
    "emit_qasm",
    "parse_qasm",
    "read_qasm",
    "write_qasm",
]
