"""
Executability, the front-layer cost, and the routing session every router
drives: it owns the current mapping, the not-yet-executed gates and the
physical output, and guarantees progress through a stall escape.
"""
import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from qctlearn.arch.graph import ArchGraph, DistanceMatrix, Edge
from qctlearn.circuit.ir import Circuit, Gate, GateKind
from qctlearn.exceptions import CircuitError
from qctlearn.models import RoutingRecord
from qctlearn.routing.mapping import Mapping
from qctlearn.telemetry import TelemetryManager
from qctlearn.utils.logging import get_logger

logger = get_logger("Routing")


@dataclass(frozen=True)
class RoutingResult:
    """
    Output of one router run.

    Attributes:
        physical_circuit (Circuit): CNOTs and inserted SWAPs over physical qubits.
        initial_mapping (Mapping): Mapping the run started from.
        swap_count (int): Number of SWAPs in `physical_circuit`.
        elapsed (float): Wall time in seconds.
        final_mapping (Mapping): Mapping after the last gate.
        router (str): Registry name of the router.
        stats (Dict[str, int]): decisions, node_expansions, escapes, fallbacks.
    """
    physical_circuit: Circuit
    initial_mapping: Mapping
    swap_count: int
    elapsed: float
    final_mapping: Mapping
    router: str = ""
    stats: Dict[str, int] = field(default_factory=dict)

    @property
    def cnot_overhead(self) -> int:
        return 3 * self.swap_count

    def to_record(self, output_qasm_path: Optional[str] = None) -> RoutingRecord:
        return RoutingRecord(
            swap_count=self.swap_count,
            cnot_overhead=self.cnot_overhead,
            elapsed_s=self.elapsed,
            output_qasm_path=output_qasm_path,
            router=self.router,
            stats=dict(self.stats),
        )


def split_executable(
    gates: Sequence[Gate], l2p: Sequence[int], rows: List[List[int]]
) -> Tuple[List[Gate], List[Gate]]:
    """
    Maximal executable prefix-closed set in one pass.

    A gate executes when no earlier remaining gate touches its qubits and
    its mapped qubits are adjacent; a gate that cannot execute blocks both
    of its qubits for everything after it.
    """
    executed: List[Gate] = []
    remaining: List[Gate] = []
    blocked: set = set()
    saturated = len(l2p) - 1
    for i, g in enumerate(gates):
        a, b = g.q0, g.q1
        if a in blocked or b in blocked:
            remaining.append(g)
            blocked.add(a)
            blocked.add(b)
            if len(blocked) >= saturated:
                remaining.extend(gates[i + 1:])
                break
            continue
        if rows[l2p[a]][l2p[b]] == 1:
            executed.append(g)
        else:
            remaining.append(g)
            blocked.add(a)
            blocked.add(b)
    return executed, remaining


def front_gates(gates: Sequence[Gate], num_nodes: Optional[int] = None) -> List[Gate]:
    """Gates with no unexecuted predecessor, in program order."""
    blocked: set = set()
    front: List[Gate] = []
    limit = (num_nodes - 1) if num_nodes else None
    for g in gates:
        if g.q0 not in blocked and g.q1 not in blocked:
            front.append(g)
        blocked.add(g.q0)
        blocked.add(g.q1)
        if limit is not None and len(blocked) >= limit:
            break
    return front


def leading_layers(gates: Sequence[Gate], k: int, num_nodes: Optional[int] = None) -> List[List[Gate]]:
    """
    The first `k` ASAP layers of a gate sequence. With `num_nodes` the scan
    stops once all but one qubit lie beyond layer k.
    """
    if k <= 0:
        return []
    out: List[List[Gate]] = [[] for _ in range(k)]
    depth: Dict[int, int] = {}
    full = 0
    for g in gates:
        da, db = depth.get(g.q0, 0), depth.get(g.q1, 0)
        layer = max(da, db)
        if layer < k:
            out[layer].append(g)
        if layer + 1 >= k:
            full += (da < k) + (db < k)
        depth[g.q0] = depth[g.q1] = layer + 1
        if num_nodes is not None and full >= num_nodes - 1:
            break
    while out and not out[-1]:
        out.pop()
    return out


def layer_cost(gates: Sequence[Gate], l2p: Sequence[int], rows: List[List[int]]) -> int:
    """Sum over gates of (hop distance - 1); adjacent gates cost nothing."""
    return sum(rows[l2p[g.q0]][l2p[g.q1]] - 1 for g in gates)


def executable_gates(c: Circuit, tau: Mapping, g: ArchGraph) -> List[int]:
    """Indices of the gates that can run under `tau` without any swap, in removal order."""
    rows = g.distance.rows
    blocked: set = set()
    out: List[int] = []
    for idx, gate in enumerate(c.gates):
        a, b = gate.q0, gate.q1
        if a in blocked or b in blocked:
            blocked.update((a, b))
            continue
        if rows[tau.l2p[a]][tau.l2p[b]] == 1:
            out.append(idx)
        else:
            blocked.update((a, b))
    return out


def cost(c: Circuit, tau: Mapping, D: DistanceMatrix) -> int:
    """Front-layer distance: sum over L_0(c) of d(tau(a), tau(b)) - 1."""
    return layer_cost(front_gates(c.gates), tau.l2p, D.rows)


def swap_costs(front: Sequence[Gate], l2p: Sequence[int], graph: ArchGraph) -> List[int]:
    """Front-layer cost after each candidate swap, in canonical edge order."""
    rows = graph.distance.rows
    placed = [(l2p[g.q0], l2p[g.q1]) for g in front]
    out: List[int] = []
    for u, v in graph.edges:
        total = 0
        for pa, pb in placed:
            if pa == u:
                pa = v
            elif pa == v:
                pa = u
            if pb == u:
                pb = v
            elif pb == v:
                pb = u
            total += rows[pa][pb] - 1
        out.append(total)
    return out


class RoutingSession:
    """
    Mutable routing state shared by every router.

    Holds the current mapping, the unexecuted gates and the physical output.
    `commit()` applies a swap and executes whatever became executable.
    """

    def __init__(self, circuit: Circuit, graph: ArchGraph,
                 initial_mapping: Optional[Mapping] = None, router: str = ""):
        if not circuit.is_cnot_only():
            raise CircuitError("routers accept CNOT-only logical circuits")
        if circuit.num_qubits > graph.num_nodes:
            raise CircuitError(
                f"circuit uses {circuit.num_qubits} qubits but {graph.name} has {graph.num_nodes}"
            )
        mapping = initial_mapping or Mapping.naive(graph.num_nodes)
        if len(mapping) != graph.num_nodes:
            raise CircuitError(f"initial mapping covers {len(mapping)} qubits, graph has {graph.num_nodes}")

        self.graph = graph
        self.router = router
        self.initial_mapping = mapping
        self.mapping = mapping
        self.pending: List[Gate] = list(circuit.gates)
        self.output: List[Gate] = []
        self.swap_count = 0
        self.stall = 0
        self.stall_limit = max(1, graph.num_nodes * graph.num_edges)
        self.stats: Dict[str, int] = {"decisions": 0, "node_expansions": 0, "escapes": 0, "fallbacks": 0}
        self._rows = graph.distance.rows
        self._started = time.perf_counter()

    @property
    def done(self) -> bool:
        return not self.pending

    def flush(self) -> int:
        """Executes every executable gate; returns how many ran."""
        executed, self.pending = split_executable(self.pending, self.mapping.l2p, self._rows)
        l2p = self.mapping.l2p
        for g in executed:
            self.output.append(Gate(GateKind.CNOT, l2p[g.q0], l2p[g.q1]))
        return len(executed)

    def commit(self, edge: Edge) -> int:
        """Inserts SWAP(edge), then executes newly executable gates."""
        u, v = edge
        self.mapping = self.mapping.swapped(u, v)
        self.output.append(Gate(GateKind.SWAP, u, v))
        self.swap_count += 1
        self.stats["decisions"] += 1
        ran = self.flush()
        self.stall = 0 if ran else self.stall + 1
        return ran

    def stalled(self, factor: int = 1) -> bool:
        return self.stall >= factor * self.stall_limit

    def escape(self) -> None:
        """
        Moves the first front gate's control along a shortest path until the
        gate executes. Always makes progress.
        """
        gate = self.pending[0]
        target = self.mapping.l2p[gate.q1]
        path = self.graph.shortest_path(self.mapping.l2p[gate.q0], target)
        logger.debug(f"Stall escape after {self.stall} idle swaps, path length {len(path) - 1}")
        self.stats["escapes"] += 1
        for here, nxt in zip(path[:-2], path[1:-1]):
            self.commit((min(here, nxt), max(here, nxt)))

    def finish(self) -> RoutingResult:
        elapsed = time.perf_counter() - self._started
        result = RoutingResult(
            physical_circuit=Circuit(self.graph.num_nodes, tuple(self.output)),
            initial_mapping=self.initial_mapping,
            swap_count=self.swap_count,
            elapsed=elapsed,
            final_mapping=self.mapping,
            router=self.router,
            stats=dict(self.stats),
        )
        TelemetryManager().record_route(self.router, self.swap_count, elapsed, self.stats["node_expansions"])
        logger.debug(f"{self.router or 'router'} finished: {self.swap_count} swaps in {elapsed:.3f}s")
        return result
