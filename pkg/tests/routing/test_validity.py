"""Every router must produce connected, equivalent circuits on every device."""
import numpy as np
import pytest

from qctlearn.arch.graph import build_grid, load_bundled
from qctlearn.circuit.ir import random_circuit
from qctlearn.plugins import RouterOptions, router_registry
from qctlearn.policy.network import PolicyModel
from qctlearn.routing.verify import check_connectivity, min_swap_brute_force, verify

ROUTERS = ["base", "ann-qct", "base-ann", "sahs", "sahs-ann", "mcts", "mcts-ann"]


def _model(graph):
    model = PolicyModel.initialize(graph, n_l=3, hidden=(16,), seed=0)
    rng = np.random.default_rng(3)
    model.weights[-1][...] = rng.normal(size=model.weights[-1].shape)
    return model


@pytest.mark.parametrize("arch", ["grid2x3", "grid4x4", "tokyo"])
@pytest.mark.parametrize("name", ROUTERS)
def test_router_outputs_verify(arch, name):
    graph = {"grid2x3": build_grid(2, 3), "grid4x4": build_grid(4, 4)}.get(arch) or load_bundled("tokyo")
    entry = router_registry.get(name)
    model = _model(graph) if entry.needs_model else None
    ratio = 0.5 if name in ("sahs-ann", "mcts-ann") else 0.0
    opts = RouterOptions(pruning_ratio=ratio, n_bp=5, sim_depth=3)
    for seed, n_gates in enumerate((20, 50)):
        lc = random_circuit(graph.num_nodes, n_gates, seed=seed)
        result = entry.route(lc, graph, None, opts, model)
        assert check_connectivity(result.physical_circuit, graph)
        assert verify(result.physical_circuit, lc, graph), name
        assert result.physical_circuit.swap_count == result.swap_count


@pytest.mark.slow
@pytest.mark.parametrize("name", ROUTERS)
def test_router_outputs_verify_at_scale(name):
    graph = build_grid(4, 4)
    entry = router_registry.get(name)
    model = _model(graph) if entry.needs_model else None
    opts = RouterOptions(pruning_ratio=0.7 if name in ("sahs-ann", "mcts-ann") else 0.0)
    for seed in range(20):
        lc = random_circuit(16, 200, seed=seed)
        result = entry.route(lc, graph, None, opts, model)
        assert verify(result.physical_circuit, lc, graph)


def test_no_router_beats_the_oracle():
    graph = build_grid(2, 3)
    corpus = [random_circuit(6, 2 + seed % 7, seed=seed) for seed in range(50)]
    optimum = [min_swap_brute_force(lc, graph, bound=12) for lc in corpus]
    for name in ROUTERS:
        entry = router_registry.get(name)
        model = _model(graph) if entry.needs_model else None
        opts = RouterOptions(pruning_ratio=0.5 if name in ("sahs-ann", "mcts-ann") else 0.0, n_bp=10, sim_depth=3)
        found = [entry.route(lc, graph, None, opts, model).swap_count for lc in corpus]
        assert all(f >= best for f, best in zip(found, optimum)), name
        if name == "base":
            assert sum(f == best for f, best in zip(found, optimum)) >= 0.3 * len(corpus)
