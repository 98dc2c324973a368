import pytest

from qctlearn.circuit.ir import Circuit, Gate
from qctlearn.circuit.qasm import emit_qasm, parse_qasm, read_qasm, write_qasm
from qctlearn.exceptions import CircuitError, QasmSyntaxError

PROGRAM = """OPENQASM 2.0;
include "qelib1.inc";
qreg q[3];
creg c[3];
h q[0];
cx q[0],q[1];
u3(0.1, 0.2, 0.3) q[2];
// a comment; with a semicolon
CX q[2], q[1];
swap q[0],q[2];
barrier q[0],q[1];
measure q[0] -> c[0];
"""


def test_single_gate():
    c = parse_qasm("qreg q[2]; cx q[0],q[1];")
    assert c == Circuit(2, (Gate.cnot(0, 1),))

def test_single_qubit_gates_are_dropped():
    c = parse_qasm(PROGRAM)
    assert c.num_qubits == 3
    assert c.gates == (Gate.cnot(0, 1), Gate.cnot(2, 1), Gate.swap(0, 2))

def test_custom_gate_definitions_are_skipped():
    text = "qreg q[2];\ngate foo a, b {\n  cx a, b;\n}\ncx q[1],q[0];\n"
    assert parse_qasm(text).pairs() == [(1, 0)]

def test_syntax_error_reports_line():
    with pytest.raises(QasmSyntaxError) as exc:
        parse_qasm("qreg q[2];\ncx q[0],q[1];\ncx q[0] q[1];\n")
    assert exc.value.line == 3
    assert "line 3" in str(exc.value)

def test_undeclared_register():
    with pytest.raises(QasmSyntaxError):
        parse_qasm("qreg q[2]; cx r[0],q[1];")

def test_out_of_range_qubit():
    with pytest.raises(QasmSyntaxError) as exc:
        parse_qasm("qreg q[2];\ncx q[0],q[5];")
    assert exc.value.line == 2

def test_multiple_qregs_rejected():
    with pytest.raises(QasmSyntaxError):
        parse_qasm("qreg a[2]; qreg b[2]; cx a[0],a[1];")

def test_missing_semicolon():
    with pytest.raises(QasmSyntaxError):
        parse_qasm("qreg q[2]; cx q[0],q[1]")

def test_syntax_errors_are_circuit_errors():
    with pytest.raises(CircuitError):
        parse_qasm("cx q[0],q[1];")

def test_emit_then_read(tmp_path):
    c = Circuit(4, (Gate.cnot(3, 0), Gate.swap(1, 2), Gate.cnot(0, 1)))
    text = emit_qasm(c)
    assert text.startswith("OPENQASM 2.0;")
    assert "swap q[1],q[2];" in text
    path = write_qasm(c, tmp_path / "nested" / "c.qasm")
    assert read_qasm(path) == c
