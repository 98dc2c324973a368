from qctlearn.arch.graph import ArchGraph, get_architecture
from qctlearn.circuit.ir import Circuit, Gate
from qctlearn.plugins import router_registry
from qctlearn.policy.network import PolicyModel
from qctlearn.routing.core import RoutingResult
from qctlearn.routing.mapping import Mapping
from qctlearn.settings import settings

__version__ = "0.1.0b1"

__all__ = [
    "ArchGraph",
    "get_architecture",
    "Circuit",
    "Gate",
    "router_registry",
    "PolicyModel",
    "RoutingResult",
    "Mapping",
    "settings",
]
