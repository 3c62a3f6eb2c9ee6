"""Acceptance criteria, one test per criterion, each printing a pass line
with its wall time and asserting the stated budget."""

import json
import subprocess
import sys
import time

from eterdom.catalogue import default_path, derive_catalogue, load_default, to_json
from eterdom.finite import (
    Variant,
    full_boundary_guard_count,
    improved_guard_count,
    init_full_boundary,
    init_general,
    init_improved,
)
from eterdom.grid import Window, dominates_region, is_dominating, is_perfect_on
from eterdom.infinite import rotate_square_step, verify_step_in_window
from eterdom.pattern import (
    LatticePlacement,
    PatternFamily,
    chang_dominating_set,
    count_restriction,
    materialize,
)
from eterdom.rng import SplitMix64
from eterdom.solver import (
    audit_strategy,
    eternal_safe_set,
    gamma,
    gamma_infinity,
    grid_graph,
    path_graph,
)
from eterdom.verify import tables_reconciled, verify_single_step_cases, verify_tables


def _done(label: str, t0: float, budget: float) -> None:
    elapsed = time.monotonic() - t0
    print(f"PASS {label}: {elapsed:.2f}s (budget {budget:.0f}s)")
    assert elapsed < budget, f"{label} exceeded its {budget}s budget ({elapsed:.2f}s)"


def test_criterion_01_perfect_domination_of_all_placements():
    t0 = time.monotonic()
    w = Window(0, 19, 0, 19)
    inner = w.shrink(2)
    for fam in PatternFamily:
        for t in range(5):
            p = materialize(LatticePlacement(fam, t), w)
            assert dominates_region(p.cells, inner)
            assert is_perfect_on(p, inner)
    _done("criterion 1 (all 10 placements dominate perfectly, 20x20)", t0, 1.0)


def test_criterion_02_counting_bounds():
    t0 = time.monotonic()
    for m in range(1, 51):
        for n in range(1, 51):
            lo, hi = m * n // 5, -(-m * n // 5)
            for fam in PatternFamily:
                counts = [count_restriction(m, n, t, fam) for t in range(5)]
                assert all(lo <= c <= hi for c in counts), (m, n, fam)
                assert lo in counts and hi in counts, (m, n, fam)
                if m <= 30 and n <= 30:
                    win = Window(0, m - 1, 0, n - 1)
                    for t in range(5):
                        assert counts[t] == len(
                            materialize(LatticePlacement(fam, t), win).cells
                        )
    _done("criterion 2 (counting bounds, closed form == enumeration)", t0, 5.0)


def test_criterion_03_single_step_cases_and_table_reconciliation():
    t0 = time.monotonic()
    results = verify_single_step_cases(half=10)  # 21x21 windows
    assert len(results) == 40
    assert all(ok for *_, ok in results)
    checks = verify_tables()
    assert tables_reconciled(checks)
    anomalies = [c for c in checks if c.status != "ok"]
    assert {c.printed for c in anomalies} == {"x + y + 1", "x + 2y + -3"}
    _done("criterion 3 (40 window cases + 2 table misprints reconciled)", t0, 1.0)


def test_criterion_04_symbolic_endurance_10k():
    t0 = time.monotonic()
    lp = LatticePlacement(PatternFamily.STRAIGHT, 0)
    rng = SplitMix64(2024)
    margin = 4
    steps = 0
    while steps < 10_000:
        cell = (rng.below(17) - 8, rng.below(17) - 8)
        if lp.contains(cell):
            continue
        w = Window(cell[0] - margin, cell[0] + margin, cell[1] - margin, cell[1] + margin)
        assert verify_step_in_window(lp, cell, w), (steps, cell, lp)
        nxt = rotate_square_step(lp, cell).after
        assert nxt.family is not lp.family
        lp = nxt
        steps += 1
    _done("criterion 4 (10^4 verified symbolic steps, family alternates)", t0, 30.0)


def test_criterion_05_static_construction_sizes():
    t0 = time.monotonic()
    for m in range(8, 21):
        for n in range(8, 21):
            p = chang_dominating_set(m, n)
            assert len(p.cells) == (m + 2) * (n + 2) // 5 - 4
            assert is_dominating(p)
    _done("criterion 5 (static construction exact on 8..20)", t0, 10.0)


def test_criterion_06_full_boundary_budget_and_endurance():
    t0 = time.monotonic()
    sizes = [(7, 7), (7, 12), (12, 12), (17, 22)]
    expected = {(7, 7): 29, (7, 12): 44, (12, 12): 64, (17, 22): 134}
    for m, n in sizes:
        assert full_boundary_guard_count(m, n) == expected[(m, n)]
        assert 5 * full_boundary_guard_count(m, n) == m * n + 8 * (m + n) - 16
        assert len(init_full_boundary(m, n).placement) == expected[(m, n)]
        for mode, seed in (("random", 42), ("greedy", 0)):
            rep = audit_strategy(Variant.FULL_BOUNDARY, m, n, mode, rounds=10_000, seed=seed)
            assert rep.ok, (m, n, mode, rep.violations)
    _done("criterion 6 (full-boundary budgets + 8x10^4 audited rounds)", t0, 120.0)


def test_criterion_07_catalogue_closure():
    t_derive = time.monotonic()
    derived = derive_catalogue()
    derive_time = time.monotonic() - t_derive
    assert derive_time < 600.0
    assert to_json(derived) == default_path().read_text()

    t0 = time.monotonic()
    cat = load_default()
    assert len(cat.placements) == 10
    assert all(len(cells) == 21 for cells in cat.placements.values())
    for sid, cells in cat.placements.items():
        unguarded = 49 - 21
        attacks = [
            (r, c) for r in range(7) for c in range(7) if (r, c) not in cells
        ]
        assert len(attacks) == unguarded
        for attack in attacks:
            assert (sid, attack) in cat.transitions
    relation = {(a, b) for (a, _), (b, _) in cat.transitions.items()}
    assert all((b, a) in relation for a, b in relation)
    _done(
        f"criterion 7 (catalogue closed+symmetric; derivation {derive_time:.2f}s)",
        t0,
        1.0,
    )


def test_criterion_08_improved_budget_and_12x12_closure():
    t0 = time.monotonic()
    for m in range(7, 53, 5):
        for n in range(7, 53, 5):
            assert improved_guard_count(m, n) * 5 == m * n + 4 * (m + n)
            if m <= 22 and n <= 22:
                assert len(init_improved(m, n).placement) == improved_guard_count(m, n)
    rep = audit_strategy(Variant.IMPROVED, 12, 12, "exhaustive")
    assert rep.ok
    assert rep.stats["reachable_states"] == 10
    assert rep.stats["edges"] == 10 * (144 - 48)
    _done("criterion 8 (improved budget identity + 12x12 exhaustive closure)", t0, 60.0)


def test_criterion_09_solver_ground_truth():
    t0 = time.monotonic()
    p5, p2, g33 = path_graph(5), path_graph(2), grid_graph(3, 3)
    assert eternal_safe_set(p5, 2).safe_count == 0
    assert gamma_infinity(p5) == 3
    assert gamma_infinity(p2) == 1
    # frozen golden for the 3x3 grid
    assert gamma_infinity(g33) == 3
    assert eternal_safe_set(g33, 3).safe_count == 10
    for g in [p2, p5, path_graph(6), grid_graph(2, 3), g33]:
        assert gamma_infinity(g) >= gamma(g)
    for g, k in [(p5, 3), (path_graph(7), 3), (g33, 3), (grid_graph(2, 5), 2)]:
        a = eternal_safe_set(g, k, elimination="batch", threads=1)
        b = eternal_safe_set(g, k, elimination="eager")
        c = eternal_safe_set(g, k, elimination="batch", threads=4)
        assert (a.safe_count, a.witness) == (b.safe_count, b.witness)
        assert (a.safe_count, a.witness) == (c.safe_count, c.witness)
    _done("criterion 9 (solver ground truths + fixpoint determinism)", t0, 120.0)


def test_criterion_10_general_overhead_linear():
    t0 = time.monotonic()
    worst = 0.0
    for m in range(16, 33):
        for n in range(16, 33):
            total = len(init_general(m, n).placement)
            static = (m + 2) * (n + 2) // 5 - 4
            gap = total - static
            assert gap <= 6 * (m + n), (m, n, gap)
            worst = max(worst, gap / (m + n))
    print(f"  measured overhead constant: {worst:.2f} (must be <= 6)")
    _done("criterion 10 (general-dims overhead <= 6(m+n) on 16..32)", t0, 10.0)


def test_criterion_11_trace_determinism(tmp_path):
    t0 = time.monotonic()
    cmd = [
        sys.executable, "-m", "eterdom.cli", "simulate",
        "--m", "12", "--n", "12", "--variant", "improved",
        "--attacker", "random", "--rounds", "500", "--seed", "7",
    ]
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    for path in (a, b):
        proc = subprocess.run(cmd + ["--trace", str(path)], capture_output=True, text=True)
        assert proc.returncode == 0, proc.stderr
    assert a.read_bytes() == b.read_bytes()
    head = json.loads(a.read_text().splitlines()[0])
    assert head["seed"] == 7
    _done("criterion 11 (byte-identical traces across two CLI runs)", t0, 60.0)
