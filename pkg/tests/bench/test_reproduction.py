"""Scaled-down reproductions of the learned routers' headline results. All of them train a model."""
import pytest

from qctlearn.arch.graph import build_grid
from qctlearn.bench.metrics import gate_count_reduction
from qctlearn.circuit.ir import random_circuit
from qctlearn.datagen.circuits import gen_training_circuits
from qctlearn.datagen.farm import load_dataset, run_label_farm
from qctlearn.models import LabelerSpec
from qctlearn.policy.train import train
from qctlearn.routing.baseline import ann_qct_route, base_ann_route, base_route
from qctlearn.routing.sahs import SahsParams, sahs_ann_route, sahs_route


def _trained(graph, labeler, n_c, n_l, out):
    circuits = gen_training_circuits(graph.num_nodes, n_l, n_c, seed=0)
    run_label_farm(circuits, graph, labeler, out, n_l, workers=4, seed=0)
    _, samples = load_dataset(out)
    model, _ = train(samples, graph, n_l, seed=0)
    return model

def _total_gates(results, circuits):
    return sum(len(lc) + r.cnot_overhead for r, lc in zip(results, circuits))


@pytest.mark.slow
def test_learned_routers_beat_base(tmp_path):
    graph = build_grid(4, 4)
    model = _trained(graph, LabelerSpec(kind="base"), 5000, 3, tmp_path)
    held_out = [random_circuit(16, 200, seed=10_000 + i) for i in range(10)]
    base = _total_gates([base_route(lc, graph) for lc in held_out], held_out)
    for route in (ann_qct_route, base_ann_route):
        learned = _total_gates([route(lc, graph, None, model) for lc in held_out], held_out)
        assert gate_count_reduction(base, learned) >= 0.05, route.__name__


@pytest.mark.slow
def test_pruned_deep_search_is_cheaper_and_as_good(tmp_path):
    graph = build_grid(2, 3)
    model = _trained(graph, LabelerSpec(kind="sahs", depth=2), 2000, 3, tmp_path)
    params = SahsParams.from_settings(depth=4)
    circuits = [random_circuit(6, 40, seed=500 + i) for i in range(10)]
    full = [sahs_route(lc, graph, None, params) for lc in circuits]
    pruned = [sahs_ann_route(lc, graph, None, params, model, 0.7) for lc in circuits]

    full_nodes = sum(r.stats["node_expansions"] for r in full)
    pruned_nodes = sum(r.stats["node_expansions"] for r in pruned)
    assert pruned_nodes < 0.3 * full_nodes
    full_swaps = sum(r.swap_count for r in full) / len(full)
    pruned_swaps = sum(r.swap_count for r in pruned) / len(pruned)
    assert pruned_swaps <= 1.05 * full_swaps
