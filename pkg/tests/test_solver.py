import pytest

from eterdom.finite import GameState, Variant, init_state, step_state
from eterdom.grid import move_plan, placement
from eterdom.solver import (
    LimitExceeded,
    audit_strategy,
    eternal_safe_set,
    gamma,
    gamma_bruteforce,
    gamma_infinity,
    greedy_attack,
    grid_gamma_dp,
    grid_graph,
    parse_graph,
    path_graph,
    run_audit,
)


def test_gamma_paths_and_small_grids():
    assert gamma(path_graph(5)) == 2
    assert gamma(path_graph(2)) == 1
    assert gamma(grid_graph(3, 3)) == 3


def test_gamma_dual_route_agreement():
    for n in range(1, 10):
        assert gamma_bruteforce(path_graph(n)) == grid_gamma_dp(1, n)
    for m, n in [(2, 2), (2, 5), (3, 3), (3, 4), (4, 4)]:
        assert gamma_bruteforce(grid_graph(m, n)) == grid_gamma_dp(m, n)


def test_gamma_8x8_matches_boundary_construction_size():
    # the static construction gives 16; the DP proves that is optimal
    assert gamma(grid_graph(8, 8)) == 16


def test_parse_graph():
    assert parse_graph("path:5").name == "path:5"
    assert parse_graph("grid:3x4").n == 12
    with pytest.raises(ValueError):
        parse_graph("tree:7")


def test_eternal_ground_truth_p5():
    assert eternal_safe_set(path_graph(5), 2).safe_count == 0
    r = eternal_safe_set(path_graph(5), 3)
    assert r.safe_count > 0
    assert r.witness is not None
    assert gamma_infinity(path_graph(5)) == 3


def test_eternal_ground_truth_p2():
    r = eternal_safe_set(path_graph(2), 1)
    assert r.safe_count == 2
    assert gamma_infinity(path_graph(2)) == 1


def test_eternal_3x3_frozen_golden():
    # computed once by the fixpoint and frozen
    assert gamma_infinity(grid_graph(3, 3)) == 3
    r = eternal_safe_set(grid_graph(3, 3), 3)
    assert r.safe_count == 10
    assert r.witness == (3, 4, 5)


def test_gamma_infinity_at_least_gamma():
    for g in [path_graph(4), path_graph(5), path_graph(6), grid_graph(2, 3), grid_graph(3, 3)]:
        assert gamma_infinity(g) >= gamma(g)


def test_safe_set_monotone_in_k():
    for g in [path_graph(5), path_graph(6), grid_graph(2, 4)]:
        k = gamma_infinity(g)
        assert eternal_safe_set(g, k).safe_count > 0
        assert eternal_safe_set(g, k + 1).safe_count > 0


def test_fixpoint_deterministic_across_orders_and_threads():
    cases = [(path_graph(5), 3), (path_graph(7), 3), (grid_graph(3, 3), 3), (grid_graph(2, 5), 2)]
    for g, k in cases:
        a = eternal_safe_set(g, k, elimination="batch", threads=1)
        b = eternal_safe_set(g, k, elimination="eager")
        c = eternal_safe_set(g, k, elimination="batch", threads=4)
        assert (a.safe_count, a.witness) == (b.safe_count, b.witness)
        assert (a.safe_count, a.witness) == (c.safe_count, c.witness)


def test_safe_set_cap():
    with pytest.raises(LimitExceeded):
        eternal_safe_set(grid_graph(7, 7), 21, cap=10_000)


def test_exhaustive_audit_improved_7x7():
    rep = audit_strategy(Variant.IMPROVED, 7, 7, "exhaustive")
    assert rep.ok
    assert rep.stats["reachable_states"] == 10
    assert rep.stats["edges"] == 280


def test_random_audit_full_boundary():
    rep = audit_strategy(Variant.FULL_BOUNDARY, 7, 7, "random", rounds=300, seed=42)
    assert rep.ok and rep.rounds_run == 300


def test_greedy_audit_improved():
    rep = audit_strategy(Variant.IMPROVED, 12, 12, "greedy", rounds=200)
    assert rep.ok


def test_greedy_attack_prefers_sparse_corner_cells():
    st = init_state(Variant.IMPROVED, 7, 7)
    cell = greedy_attack(st)
    assert cell not in st.placement.cells


def test_sabotaged_strategy_caught_quickly():
    # dropping the ring shifts (boundary guards frozen in place) must trip
    # the auditor within a few rounds
    def sabotaged(state: GameState, attack):
        nxt, plan = step_state(state, attack)
        ring = state.dims.boundary()
        pairs = {
            (a, a if (a in ring) != (b in ring) or (a in ring and a != b) else b)
            for a, b in plan.pairs
        }
        cells = frozenset(b for _, b in pairs)
        broken = GameState(
            nxt.dims,
            placement(cells, nxt.dims),
            nxt.interior_pattern,
            nxt.variant,
            nxt.round,
        )
        return broken, move_plan(pairs)

    rep = run_audit(init_state(Variant.FULL_BOUNDARY, 7, 7), sabotaged, "random", rounds=100, seed=42)
    assert not rep.ok
    assert rep.counterexample is not None
    assert rep.rounds_run <= 100
