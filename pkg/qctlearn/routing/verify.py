"""
Correctness oracles for routed circuits: connectivity, functional
equivalence by replay, SWAP decomposition and an exhaustive minimum-swap
search for small instances.
"""
from collections import deque
from dataclasses import dataclass
from typing import Dict, List, Optional, Set, Tuple

from qctlearn.arch.graph import ArchGraph
from qctlearn.circuit.ir import Circuit, Gate, GateKind
from qctlearn.exceptions import BoundExceededError, CircuitError
from qctlearn.routing.core import split_executable
from qctlearn.routing.mapping import Mapping


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_connectivity(pc: Circuit, g: ArchGraph) -> VerificationResult:
    for pos, gate in enumerate(pc.gates):
        if not g.is_edge(gate.q0, gate.q1):
            return VerificationResult(
                False, f"connectivity: gate {pos} {gate.kind.value}{gate.qubits} is not on an edge"
            )
    return VerificationResult(True)


def verify(pc: Circuit, lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping] = None) -> VerificationResult:
    """
    True iff every gate of `pc` sits on an edge of `g` and replaying `pc`
    (SWAPs move logical qubits, CNOTs are pulled back through the current
    mapping) yields `lc`'s gates in an order its dependencies allow.
    """
    conn = check_connectivity(pc, g)
    if not conn:
        return conn
    tau = tau_ini or Mapping.naive(g.num_nodes)
    if len(tau) < lc.num_qubits:
        return VerificationResult(False, "mapping: initial mapping does not cover the circuit")

    # per logical qubit, the queue of lc gate indices still to run on it
    queues: Dict[int, deque] = {}
    for idx, gate in enumerate(lc.gates):
        queues.setdefault(gate.q0, deque()).append(idx)
        queues.setdefault(gate.q1, deque()).append(idx)

    p2l = list(tau.p2l)
    seen = 0
    for pos, gate in enumerate(pc.gates):
        if gate.kind is GateKind.SWAP:
            p2l[gate.q0], p2l[gate.q1] = p2l[gate.q1], p2l[gate.q0]
            continue
        a, b = p2l[gate.q0], p2l[gate.q1]
        qa, qb = queues.get(a), queues.get(b)
        if not qa or not qb or qa[0] != qb[0]:
            return VerificationResult(
                False, f"order: gate {pos} acts on logical ({a},{b}) which is not ready or not in the circuit"
            )
        want = lc.gates[qa[0]]
        if (want.q0, want.q1) != (a, b):
            return VerificationResult(False, f"direction: gate {pos} is CX({a},{b}), expected CX({want.q0},{want.q1})")
        qa.popleft()
        qb.popleft()
        seen += 1

    if seen != len(lc.gates):
        return VerificationResult(False, f"missing gate: {len(lc.gates) - seen} logical gates never executed")
    return VerificationResult(True)


def decompose_swaps(pc: Circuit) -> Circuit:
    """SWAP(a,b) -> CX(a,b) CX(b,a) CX(a,b), in place."""
    out: List[Gate] = []
    for gate in pc.gates:
        if gate.kind is GateKind.SWAP:
            a, b = gate.q0, gate.q1
            out.extend((Gate.cnot(a, b), Gate.cnot(b, a), Gate.cnot(a, b)))
        else:
            out.append(gate)
    return Circuit(pc.num_qubits, tuple(out))


def min_swap_brute_force(
    lc: Circuit, g: ArchGraph, tau_ini: Optional[Mapping] = None, bound: int = 4
) -> int:
    """
    Minimal number of swaps that routes `lc`, by breadth-first search over
    (mapping, remaining gates) states with maximal execution after each swap.
    Intended for graphs of at most ~9 nodes and circuits of ~12 gates.

    Raises:
        BoundExceededError: when more than `bound` swaps would be needed.
    """
    if not lc.is_cnot_only():
        raise CircuitError("brute force accepts CNOT-only logical circuits")
    rows = g.distance.rows
    tau = tau_ini or Mapping.naive(g.num_nodes)
    _, remaining = split_executable(lc.gates, tau.l2p, rows)
    if not remaining:
        return 0

    start = (tau.l2p, tuple(remaining))
    seen: Set[Tuple] = {start}
    frontier = [start]
    for swaps in range(1, bound + 1):
        nxt = []
        for l2p, rem in frontier:
            m = Mapping(l2p)
            for u, v in g.edges:
                child = m.swapped(u, v)
                _, left = split_executable(rem, child.l2p, rows)
                if not left:
                    return swaps
                state = (child.l2p, tuple(left))
                if state not in seen:
                    seen.add(state)
                    nxt.append(state)
        frontier = nxt
    raise BoundExceededError(f"more than {bound} swaps needed")

