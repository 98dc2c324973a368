import pytest

from qctlearn.arch.graph import build_grid
from qctlearn.circuit.ir import Circuit, random_circuit
from qctlearn.routing.baseline import base_route
from qctlearn.routing.mapping import Mapping
from qctlearn.routing.pruning import kept_candidates, prune_count
from qctlearn.routing.sahs import SahsParams, SahsSearch, SearchNode, node_value, sahs_ann_route, sahs_route
from qctlearn.routing.verify import min_swap_brute_force, verify

# --- Parameters and pruning ---

def test_params_validation():
    with pytest.raises(ValueError):
        SahsParams(depth=0)
    with pytest.raises(ValueError):
        SahsParams(decay=0.0)
    assert SahsParams.from_settings(depth=4).depth == 4

def test_prune_count():
    assert prune_count(7, 0.0) == 0
    assert prune_count(7, 0.5) == 3
    assert prune_count(7, 0.7) == 4
    assert prune_count(1, 0.9) == 0
    with pytest.raises(ValueError):
        prune_count(7, 1.0)
    with pytest.raises(ValueError):
        prune_count(7, -0.1)

def test_kept_candidates():
    probs = [0.1, 0.3, 0.05, 0.3, 0.25]
    assert kept_candidates(probs, 0.4) == [1, 3, 4]
    assert kept_candidates(probs, 0.0) == [0, 1, 2, 3, 4]
    # equal probabilities: the higher index is dropped first
    assert kept_candidates([0.2] * 5, 0.4) == [0, 1, 2]

# --- Node heuristic ---

def test_node_value_of_finished_node(grid2x3):
    node = SearchNode(mapping=Mapping.naive(6), remaining=[], executed_count=4)
    assert node_value(node, SahsParams(), grid2x3) == 4.0

def test_node_value_penalizes_distance(fig6_circuit, grid2x3):
    params = SahsParams(lookahead_layers=0)
    node = SearchNode(mapping=Mapping.naive(6), remaining=list(fig6_circuit.gates))
    # only the front gate (1,5) counts: distance 2, cost 1
    assert node_value(node, params, grid2x3) == -1.0

# --- Routing ---

def test_sahs_routes_fig6_optimally(fig6_circuit, grid2x3):
    result = sahs_route(fig6_circuit, grid2x3, params=SahsParams(depth=2))
    assert result.swap_count == 2
    assert verify(result.physical_circuit, fig6_circuit, grid2x3)
    assert result.stats["node_expansions"] > 0

def test_search_expansions_at_depth_two(fig6_circuit, grid2x3):
    search = SahsSearch(grid2x3, SahsParams(depth=2))
    path = search.best_path(Mapping.naive(6), fig6_circuit.gates)
    assert len(path) == 2
    # the root plus each of its 7 children
    assert search.expansions == 8

def test_sahs_output_is_valid(grid4x4):
    for seed in range(3):
        lc = random_circuit(16, 60, seed=seed)
        result = sahs_route(lc, grid4x4)
        assert verify(result.physical_circuit, lc, grid4x4)

def test_sahs_matches_or_beats_base_on_small_circuits(grid2x3):
    wins = 0
    total = 50
    for seed in range(total):
        lc = random_circuit(6, 2 + seed % 7, seed=seed)
        best = min_swap_brute_force(lc, grid2x3, bound=12)
        found = sahs_route(lc, grid2x3, params=SahsParams(depth=2)).swap_count
        assert found >= best
        wins += found <= base_route(lc, grid2x3).swap_count
    assert wins >= 0.5 * total

@pytest.mark.slow
def test_deeper_search_needs_fewer_swaps_on_average():
    grid3x3 = build_grid(3, 3)
    circuits = [random_circuit(9, 40, seed=seed) for seed in range(20)]
    d2 = sum(sahs_route(lc, grid3x3, params=SahsParams(depth=2)).swap_count for lc in circuits)
    d3 = sum(sahs_route(lc, grid3x3, params=SahsParams(depth=3)).swap_count for lc in circuits)
    assert d3 <= d2

def test_sahs_ann_with_zero_ratio_is_sahs(grid2x3, random_model):
    for seed in range(20):
        lc = random_circuit(6, 25, seed=seed)
        plain = sahs_route(lc, grid2x3, params=SahsParams(depth=2))
        pruned = sahs_ann_route(lc, grid2x3, None, SahsParams(depth=2), random_model, 0.0)
        assert pruned.physical_circuit == plain.physical_circuit

def test_sahs_ann_prunes_the_tree(grid2x3, random_model):
    lc = Circuit.from_pairs(6, [(1, 5), (1, 2), (2, 4), (2, 3), (0, 2)])
    search_full = SahsSearch(grid2x3, SahsParams(depth=2))
    search_full.best_path(Mapping.naive(6), lc.gates)

    def prune(node):
        return kept_candidates(random_model.recommend(node.remaining, node.mapping), 0.5)

    search_pruned = SahsSearch(grid2x3, SahsParams(depth=2), prune)
    search_pruned.best_path(Mapping.naive(6), lc.gates)
    # 7 - floor(0.5 * 7) = 4 children per node
    assert search_pruned.expansions == 1 + 4
    assert search_full.expansions == 1 + 7

def test_sahs_ann_output_is_valid(grid2x3, random_model):
    for seed in range(5):
        lc = random_circuit(6, 30, seed=seed)
        result = sahs_ann_route(lc, grid2x3, None, SahsParams(depth=2), random_model, 0.7)
        assert verify(result.physical_circuit, lc, grid2x3)
        assert result.router == "sahs-ann"

def test_sahs_ann_rejects_bad_ratio(fig6_circuit, grid2x3, random_model):
    with pytest.raises(ValueError):
        sahs_ann_route(fig6_circuit, grid2x3, None, None, random_model, 1.0)
