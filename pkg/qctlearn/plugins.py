import importlib.metadata
from dataclasses import dataclass, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from opentelemetry import trace

from qctlearn.arch.graph import ArchGraph
from qctlearn.circuit.ir import Circuit
from qctlearn.exceptions import BenchError
from qctlearn.routing.baseline import ann_qct_route, base_ann_route, base_route
from qctlearn.routing.core import RoutingResult
from qctlearn.routing.mapping import Mapping
from qctlearn.routing.mcts import MctsParams, best_of, mcts_ann_route, mcts_route
from qctlearn.routing.sahs import SahsParams, sahs_ann_route, sahs_route
from qctlearn.routing.verify import VerificationResult, verify
from qctlearn.telemetry import TelemetryManager
from qctlearn.utils.logging import get_logger

logger = get_logger("RouterRegistry")


@dataclass(frozen=True)
class RouterOptions:
    """Tunables shared by every router; each router reads the ones it uses."""
    depth: Optional[int] = None
    pruning_ratio: float = 0.0
    n_bp: Optional[int] = None
    sim_depth: Optional[int] = None
    seed: int = 0


RouteFn = Callable[[Circuit, ArchGraph, Optional[Mapping], RouterOptions, object], RoutingResult]


@dataclass(frozen=True)
class RouterEntry:
    name: str
    route: RouteFn
    needs_model: bool = False
    stochastic: bool = False


def _mcts_params(o: RouterOptions) -> MctsParams:
    return MctsParams.from_settings(n_bp=o.n_bp, seed=o.seed, sim_depth=o.sim_depth)


BUILTINS = (
    RouterEntry("base", lambda lc, g, tau, o, m: base_route(lc, g, tau)),
    RouterEntry("ann-qct", lambda lc, g, tau, o, m: ann_qct_route(lc, g, tau, m), needs_model=True),
    RouterEntry("base-ann", lambda lc, g, tau, o, m: base_ann_route(lc, g, tau, m), needs_model=True),
    RouterEntry("sahs", lambda lc, g, tau, o, m: sahs_route(lc, g, tau, SahsParams.from_settings(o.depth))),
    RouterEntry(
        "sahs-ann",
        lambda lc, g, tau, o, m: sahs_ann_route(lc, g, tau, SahsParams.from_settings(o.depth), m, o.pruning_ratio),
        needs_model=True,
    ),
    RouterEntry("mcts", lambda lc, g, tau, o, m: mcts_route(lc, g, tau, _mcts_params(o)), stochastic=True),
    RouterEntry(
        "mcts-ann",
        lambda lc, g, tau, o, m: mcts_ann_route(lc, g, tau, _mcts_params(o), m, o.pruning_ratio),
        needs_model=True,
        stochastic=True,
    ),
)


class RouterRegistry:
    """
    Router lookup by name.

    Built-in routers are always present. Other packages can add routers
    through the ``qctlearn.routers`` entry-point group; the entry point must
    be a callable taking the registry:

    [tool.poetry.plugins."qctlearn.routers"]
    "my_router" = "my_package.routing:register"
    """

    def __init__(self) -> None:
        self._routers: Dict[str, RouterEntry] = {e.name: e for e in BUILTINS}
        self._loaded = False

    def load_plugins(self) -> None:
        if self._loaded:
            return
        for ep in importlib.metadata.entry_points(group="qctlearn.routers"):
            try:
                plugin_func = ep.load()
                if callable(plugin_func):
                    logger.info(f"Loading router plugin from entry point: {ep.name}")
                    plugin_func(self)
                else:
                    logger.warning(f"Plugin {ep.name} does not expose a callable.")
            except Exception as e:
                logger.error(f"Failed to load plugin {ep.name}: {e}")
        self._loaded = True

    def register(self, entry: RouterEntry) -> None:
        self._routers[entry.name] = entry
        logger.debug(f"Registered router: {entry.name}")

    def get(self, name: str) -> RouterEntry:
        self.load_plugins()
        try:
            return self._routers[name]
        except KeyError:
            raise BenchError(f"unknown router {name!r}; available: {', '.join(self.names())}") from None

    def names(self) -> List[str]:
        return list(self._routers)


# Global singleton
router_registry = RouterRegistry()


def run_verified(
    entry: RouterEntry,
    lc: Circuit,
    graph: ArchGraph,
    opts: RouterOptions,
    model: object,
    seeds: Sequence[int],
) -> Tuple[RoutingResult, VerificationResult]:
    """
    Routes `lc` inside a ``route_circuit`` span and verifies the output.

    Stochastic routers keep the best of `seeds`; the others run once with
    the first seed. A raising router and a failed check are both counted in
    ``qct_routing_failures_total`` and mark the span as failed; exceptions
    propagate, failed checks are returned to the caller.
    """
    if not seeds:
        raise ValueError("run_verified needs at least one seed")
    telemetry = TelemetryManager()

    def once(seed: int) -> RoutingResult:
        return entry.route(lc, graph, None, replace(opts, seed=seed), model)

    with telemetry.traced("route_circuit", router=entry.name, arch=graph.name, gates=len(lc)) as span:
        try:
            result = best_of(once, seeds) if entry.stochastic and len(seeds) > 1 else once(seeds[0])
        except Exception:
            telemetry.record_failure(entry.name, "exception")
            raise
        span.set_attribute("swaps", result.swap_count)
        check = verify(result.physical_circuit, lc, graph, result.initial_mapping)
        if not check:
            telemetry.record_failure(entry.name, "verification")
            span.set_status(trace.Status(trace.StatusCode.ERROR, check.reason))
            logger.warning(f"{entry.name} produced an invalid circuit: {check.reason}")
        return result, check
