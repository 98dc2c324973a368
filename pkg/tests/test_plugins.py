from typing import Any
from unittest.mock import MagicMock, patch

import pytest
from opentelemetry.trace import StatusCode

from qctlearn.circuit.ir import Circuit
from qctlearn.exceptions import BenchError
from qctlearn.plugins import BUILTINS, RouterEntry, RouterOptions, RouterRegistry, run_verified
from qctlearn.routing.baseline import base_route
from qctlearn.routing.core import RoutingResult
from qctlearn.routing.mapping import Mapping
from qctlearn.telemetry import TelemetryManager


def mock_router(lc, g, tau, opts, model):
    return base_route(lc, g, tau)

def mock_plugin_entry(registry: RouterRegistry) -> None:
    registry.register(RouterEntry("mock-router", mock_router))


@patch('qctlearn.plugins.importlib.metadata.entry_points', return_value=[])
def test_builtins_are_registered(mock_entry_points: MagicMock) -> None:
    registry = RouterRegistry()
    assert registry.names() == [e.name for e in BUILTINS]
    assert registry.get("sahs-ann").needs_model
    assert registry.get("mcts").stochastic
    assert not registry.get("base").needs_model

@patch('qctlearn.plugins.importlib.metadata.entry_points', return_value=[])
def test_manual_registration(mock_entry_points: MagicMock) -> None:
    registry = RouterRegistry()
    registry.register(RouterEntry("manual", mock_router))
    assert registry.get("manual").route is mock_router

@patch('qctlearn.plugins.importlib.metadata.entry_points', return_value=[])
def test_unknown_router(mock_entry_points: MagicMock) -> None:
    with pytest.raises(BenchError, match="unknown router"):
        RouterRegistry().get("sabre")

@patch('qctlearn.plugins.importlib.metadata.entry_points')
def test_plugin_auto_discovery(mock_entry_points: MagicMock, fig6_circuit, grid2x3) -> None:
    """Routers published under the qctlearn.routers entry-point group are loaded on first lookup."""
    mock_ep = MagicMock()
    mock_ep.name = "test_plugin"
    mock_ep.load.return_value = mock_plugin_entry

    def mock_ep_func(group: str = "") -> Any:
        if group == 'qctlearn.routers':
            return [mock_ep]
        return []

    mock_entry_points.side_effect = mock_ep_func

    registry = RouterRegistry()
    entry = registry.get("mock-router")
    assert mock_ep.load.called
    result = entry.route(fig6_circuit, grid2x3, None, None, None)
    assert result.swap_count == 3

@patch('qctlearn.plugins.importlib.metadata.entry_points')
def test_broken_plugin_is_skipped(mock_entry_points: MagicMock) -> None:
    mock_ep = MagicMock()
    mock_ep.name = "broken"
    mock_ep.load.side_effect = ImportError("no module named broken")
    mock_entry_points.return_value = [mock_ep]

    registry = RouterRegistry()
    assert registry.get("base").name == "base"
    assert "broken" not in registry.names()

# --- verified routing ---

def _failures(router: str, reason: str) -> float:
    value = TelemetryManager().metrics.registry.get_sample_value(
        "qct_routing_failures_total", {"router": router, "reason": reason}
    )
    return value or 0.0

def exploding_router(lc, g, tau, opts, model):
    raise RuntimeError("router blew up")

def lying_router(lc, g, tau, opts, model):
    naive = Mapping.naive(g.num_nodes)
    return RoutingResult(Circuit(g.num_nodes), naive, 0, 0.0, naive, "lying", {})

def test_run_verified_traces_a_good_route(spans, fig6_circuit, grid2x3) -> None:
    entry = RouterEntry("base", mock_router)
    result, check = run_verified(entry, fig6_circuit, grid2x3, RouterOptions(), None, [0])
    assert check
    assert result.swap_count == 3
    (span,) = spans.get_finished_spans()
    assert span.name == "route_circuit"
    assert span.attributes["router"] == "base"
    assert span.attributes["swaps"] == 3
    assert span.status.status_code == StatusCode.UNSET

def test_run_verified_counts_exceptions(spans, fig6_circuit, grid2x3) -> None:
    before = _failures("exploding", "exception")
    with pytest.raises(RuntimeError, match="blew up"):
        run_verified(RouterEntry("exploding", exploding_router), fig6_circuit, grid2x3, RouterOptions(), None, [0])
    assert _failures("exploding", "exception") == before + 1
    (span,) = spans.get_finished_spans()
    assert span.status.status_code == StatusCode.ERROR
    assert [e.name for e in span.events] == ["exception"]

def test_run_verified_counts_invalid_output(spans, fig6_circuit, grid2x3) -> None:
    before = _failures("lying", "verification")
    _, check = run_verified(RouterEntry("lying", lying_router), fig6_circuit, grid2x3, RouterOptions(), None, [0])
    assert not check
    assert _failures("lying", "verification") == before + 1
    (span,) = spans.get_finished_spans()
    assert span.status.status_code == StatusCode.ERROR

def test_run_verified_keeps_best_of_seeds_for_stochastic_routers(fig6_circuit, grid2x3) -> None:
    seen = []

    def counting(lc, g, tau, opts, model):
        seen.append(opts.seed)
        return base_route(lc, g, tau)

    entry = RouterEntry("counting", counting, stochastic=True)
    result, _ = run_verified(entry, fig6_circuit, grid2x3, RouterOptions(), None, [3, 4, 5])
    assert seen == [3, 4, 5]
    assert result.stats["runs"] == 3
    seen.clear()
    run_verified(RouterEntry("once", counting), fig6_circuit, grid2x3, RouterOptions(), None, [7, 8])
    assert seen == [7]
