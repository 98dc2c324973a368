from typing import Optional, Sequence, Tuple

from qctlearn.arch.graph import ArchGraph, Edge
from qctlearn.exceptions import CircuitError, NonEdgeError


class Mapping:
    """
    Bijection logical qubit -> physical qubit over all device nodes.

    Logical qubits the circuit does not use are idle placeholders, so the
    mapping is always a permutation of ``range(num_nodes)``. Instances are
    immutable; swaps return new mappings.
    """
    __slots__ = ("l2p", "p2l")

    l2p: Tuple[int, ...]
    p2l: Tuple[int, ...]

    def __init__(self, l2p: Sequence[int]):
        l2p = tuple(int(v) for v in l2p)
        n = len(l2p)
        if sorted(l2p) != list(range(n)):
            raise CircuitError(f"mapping {l2p} is not a permutation of range({n})")
        p2l = [0] * n
        for q, v in enumerate(l2p):
            p2l[v] = q
        self.l2p = l2p
        self.p2l = tuple(p2l)

    @classmethod
    def naive(cls, n: int) -> "Mapping":
        """q_i -> v_i."""
        return cls._raw(tuple(range(n)), tuple(range(n)))

    @classmethod
    def _raw(cls, l2p: Tuple[int, ...], p2l: Tuple[int, ...]) -> "Mapping":
        m = object.__new__(cls)
        m.l2p = l2p
        m.p2l = p2l
        return m

    def __len__(self) -> int:
        return len(self.l2p)

    def physical(self, q: int) -> int:
        return self.l2p[q]

    def logical(self, v: int) -> int:
        return self.p2l[v]

    def swapped(self, u: int, v: int) -> "Mapping":
        """Exchanges the logical occupants of physical nodes u and v (no edge check)."""
        p2l = list(self.p2l)
        l2p = list(self.l2p)
        a, b = p2l[u], p2l[v]
        p2l[u], p2l[v] = b, a
        l2p[a], l2p[b] = v, u
        return Mapping._raw(tuple(l2p), tuple(p2l))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Mapping):
            return NotImplemented
        return self.l2p == other.l2p

    def __hash__(self) -> int:
        return hash(self.l2p)

    def __repr__(self) -> str:
        return f"Mapping({list(self.l2p)})"


def apply_swap(tau: Mapping, e: Edge, graph: Optional[ArchGraph] = None) -> Mapping:
    """
    Swap along edge ``e = (v_i, v_j)``: the logical qubits sitting on v_i and
    v_j trade places. The input mapping is not modified.

    Raises:
        NonEdgeError: when `graph` is given and e is not one of its edges.
    """
    u, v = e
    if graph is not None and not graph.is_edge(u, v):
        raise NonEdgeError(f"({u},{v}) is not an edge of {graph.name}")
    if u == v:
        raise NonEdgeError(f"({u},{v}) is a self-loop")
    return tau.swapped(u, v)
