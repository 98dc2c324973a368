"""
Reader and writer for the OpenQASM 2.0 subset used by the benchmarks.

Accepted: ``OPENQASM``/``include`` headers, a single ``qreg``, ``creg``,
``cx``/``CX``, ``swap``, ``barrier``/``measure``/``reset``, and any
single-qubit gate (with or without parameters). Single-qubit gates are
dropped: they do not affect routing when the objective is the gate count.
"""
import re
from pathlib import Path
from typing import List, Optional, Tuple, Union

from qctlearn.circuit.ir import Circuit, Gate, GateKind
from qctlearn.exceptions import QasmSyntaxError

_QREG = re.compile(r"^qreg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_CREG = re.compile(r"^creg\s+([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")
_GATE = re.compile(r"^([A-Za-z_]\w*)\s*(\([^)]*\))?\s+(.+)$")
_OPERAND = re.compile(r"^([A-Za-z_]\w*)\s*\[\s*(\d+)\s*\]$")

_IGNORED = {"barrier", "measure", "reset", "opaque", "gate"}


_GATE_DEF = re.compile(r"\bgate\s[^{]*\{[^}]*\}", re.S)


def _statements(text: str) -> List[Tuple[int, str]]:
    """
    Splits source into (line, statement) pairs.

    Strips // comments and custom gate definitions (line numbers preserved);
    statements may span lines and are reported at their first line.
    """
    text = _GATE_DEF.sub(lambda m: "\n" * m.group(0).count("\n"), text)
    out: List[Tuple[int, str]] = []
    pending = ""
    start = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line:
            continue
        if not pending:
            start = lineno
        pending = f"{pending} {line}" if pending else line
        *complete, pending = pending.split(";")
        for stmt in complete:
            stmt = stmt.strip()
            if stmt:
                out.append((start, stmt))
        pending = pending.strip()
        if pending:
            start = lineno
    if pending:
        raise QasmSyntaxError(f"missing ';' after {pending!r}", start)
    return out


def parse_qasm(text: str) -> Circuit:
    """
    Parses an OpenQASM 2.0 subset program into a two-qubit-gate circuit.

    Raises:
        QasmSyntaxError: unparsable statement, undeclared register or qubit,
            out-of-range index, or more than one qreg.
    """
    reg_name: Optional[str] = None
    size = 0
    gates: List[Gate] = []

    for lineno, stmt in _statements(text):
        if stmt.startswith("OPENQASM") or stmt.startswith("include"):
            continue
        m = _QREG.match(stmt)
        if m:
            if reg_name is not None:
                raise QasmSyntaxError("multiple qreg declarations are not supported", lineno)
            reg_name, size = m.group(1), int(m.group(2))
            continue
        if _CREG.match(stmt):
            continue

        m = _GATE.match(stmt)
        if not m:
            raise QasmSyntaxError(f"cannot parse statement {stmt!r}", lineno)
        name = m.group(1).lower()
        if name in _IGNORED:
            continue
        operands = [op.strip() for op in m.group(3).split(",")]
        qubits: List[int] = []
        for op in operands:
            om = _OPERAND.match(op)
            if not om:
                raise QasmSyntaxError(f"bad operand {op!r}", lineno)
            if reg_name is None or om.group(1) != reg_name:
                raise QasmSyntaxError(f"reference to undeclared register {om.group(1)!r}", lineno)
            index = int(om.group(2))
            if index >= size:
                raise QasmSyntaxError(f"qubit index out of range: {op} (qreg size {size})", lineno)
            qubits.append(index)

        if len(qubits) == 1:
            continue
        if len(qubits) != 2:
            raise QasmSyntaxError(f"{name} on {len(qubits)} qubits is not supported", lineno)
        if name == "cx":
            gates.append(Gate(GateKind.CNOT, qubits[0], qubits[1]))
        elif name == "swap":
            gates.append(Gate(GateKind.SWAP, qubits[0], qubits[1]))
        else:
            raise QasmSyntaxError(f"unsupported two-qubit gate {name!r}", lineno)

    if reg_name is None:
        raise QasmSyntaxError("no qreg declared")
    return Circuit(size, tuple(gates))


def emit_qasm(c: Circuit, register: str = "q") -> str:
    """Writes the circuit as OpenQASM 2.0 (header, one qreg, cx/swap lines)."""
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg {register}[{c.num_qubits}];"]
    for g in c.gates:
        lines.append(f"{g.kind.value} {register}[{g.q0}],{register}[{g.q1}];")
    return "\n".join(lines) + "\n"


def read_qasm(path: Union[str, Path]) -> Circuit:
    return parse_qasm(Path(path).read_text(encoding="utf-8"))


def write_qasm(c: Circuit, path: Union[str, Path]) -> Path:
    p = Path(path)
    p.parent.mkdir(parents=True, exist_ok=True)
    p.write_text(emit_qasm(c), encoding="utf-8")
    return p
