import pytest

from eterdom.grid import Window, move_plan
from eterdom.infinite import (
    AttackOnGuard,
    Direction,
    EmptySquare,
    empty_squares,
    expand_step,
    responsible_guard,
    rotate_square_step,
    shift_step,
    verify_step_in_window,
)
from eterdom.pattern import LatticePlacement, PatternFamily, f_value, materialize
from eterdom.rng import SplitMix64

S = PatternFamily.STRAIGHT
T = PatternFamily.TRANSPOSED


def test_empty_squares_straight_origin():
    sqs = empty_squares(S, (0, 0))
    assert set(sqs[1].cells()) == {(1, 0), (1, 1), (2, 0), (2, 1)}
    assert set(sqs[0].cells()) == {(-1, 1), (-1, 2), (0, 1), (0, 2)}


def test_empty_squares_transposed_origin():
    sqs = empty_squares(T, (0, 0))
    assert set(sqs[0].cells()) == {(0, 1), (0, 2), (1, 1), (1, 2)}
    # index 2 is the derived block left of the guard
    assert set(sqs[2].cells()) == {(-1, -2), (-1, -1), (0, -2), (0, -1)}


def test_empty_squares_are_empty_for_all_guards():
    for fam in PatternFamily:
        for t in range(5):
            lp = LatticePlacement(fam, t)
            for guard in materialize(lp, Window(-3, 3, -3, 3)).cells:
                for sq in empty_squares(fam, guard):
                    assert all(not lp.contains(c) for c in sq.cells())


def test_responsible_guard_examples():
    lp = LatticePlacement(S, 0)
    assert responsible_guard(lp, (-1, 0)) == (0, 0)
    # resolved by scanning the 4 neighbors for the unique lattice member
    g = responsible_guard(lp, (0, -1))
    assert g in {(-1, -1), (1, -1), (0, -2), (0, 0)} and lp.contains(g)
    assert g == (0, 0)
    lpt = LatticePlacement(T, 0)
    gt = responsible_guard(lpt, (1, 0))
    assert lpt.contains(gt) and abs(gt[0] - 1) + abs(gt[1]) == 1


def test_responsible_guard_rejects_guarded_cell():
    with pytest.raises(AttackOnGuard):
        responsible_guard(LatticePlacement(S, 0), (0, 0))


def test_shift_step_goldens():
    lp = LatticePlacement(S, 0)
    assert shift_step(lp, (-1, 0)) == (LatticePlacement(S, 4), Direction.UP)
    assert shift_step(lp, (0, 1)) == (LatticePlacement(S, 2), Direction.RIGHT)
    assert shift_step(lp, (0, -1)) == (LatticePlacement(S, 3), Direction.LEFT)


def test_shift_step_golden_against_window_oracle():
    # locate the responsible guard by materializing a window around the attack
    lp = LatticePlacement(S, 0)
    for attack in [(0, 1), (0, -1), (-1, 0), (1, 1)]:
        if lp.contains(attack):
            continue
        w = Window(attack[0] - 3, attack[0] + 3, attack[1] - 3, attack[1] + 3)
        guards = materialize(lp, w).cells
        adjacent = [
            g
            for g in guards
            if abs(g[0] - attack[0]) + abs(g[1] - attack[1]) == 1
        ]
        assert len(adjacent) == 1
        new_lp, d = shift_step(lp, attack)
        assert (attack[0] - adjacent[0][0], attack[1] - adjacent[0][1]) == d.delta
        assert new_lp.t == f_value(attack, S)


def test_shift_step_closure():
    lp = LatticePlacement(S, 0)
    rng = SplitMix64(11)
    for _ in range(200):
        cell = (rng.below(9) - 4, rng.below(9) - 4)
        if lp.contains(cell):
            continue
        lp, _ = shift_step(lp, cell)
        assert lp.family is S


def test_rotate_square_step_golden_moves_up_attack():
    lp = LatticePlacement(S, 0)
    g = (0, 0)
    step = rotate_square_step(lp, (-1, 0))
    assert step.after == LatticePlacement(T, (2 * g[0] + g[1] - 2) % 5)
    expected = {
        ((0, 0), (-1, 0)),
        ((-2, 1), (-2, 2)),
        ((-1, 3), (0, 3)),
        ((1, 2), (1, 1)),
        ((-3, -1), (-3, -1)),
    }
    assert step.local_moves.pairs == frozenset(expected)
    assert step.pattern_square.index == 0


def test_rotate_square_residue_formulas():
    # successor residues match the case-table forms for arbitrary guards
    for gr, gc in [(0, 0), (7, -3), (-2, 9)]:
        for fam, d, expr in [
            (S, (-1, 0), lambda x, y: 2 * x + y - 2),
            (S, (0, 1), lambda x, y: 2 * x + y + 1),
            (T, (0, 1), lambda x, y: x + 2 * y + 2),
            (T, (1, 0), lambda x, y: x + 2 * y + 1),
        ]:
            t = f_value((gr, gc), fam)
            lp = LatticePlacement(fam, t)
            attack = (gr + d[0], gc + d[1])
            if lp.contains(attack):
                continue
            step = rotate_square_step(lp, attack)
            assert responsible_guard(lp, attack) == (gr, gc)
            assert step.after.t == expr(gr, gc) % 5
            assert step.after.family is not fam


def test_rotation_moves_have_unit_distance_and_keep_square_empty():
    for fam in PatternFamily:
        for t in range(5):
            lp = LatticePlacement(fam, t)
            for d in Direction:
                attack = _attack_with_direction(lp, d)
                step = rotate_square_step(lp, attack)
                g = responsible_guard(lp, attack)
                movers = [(a, b) for a, b in step.local_moves.pairs if a != b]
                assert len(movers) == 4
                for a, b in movers:
                    assert abs(a[0] - b[0]) + abs(a[1] - b[1]) == 1
                anchor = step.pattern_square.anchor
                sq = EmptySquare(
                    (g[0] + anchor[0], g[1] + anchor[1]),
                    step.pattern_square.index,
                    step.pattern_square.primed,
                )
                for cell in sq.cells():
                    assert not lp.contains(cell)
                    assert not step.after.contains(cell)


def _attack_with_direction(lp, direction):
    for r in range(-2, 3):
        for c in range(-2, 3):
            cell = (r, c)
            if lp.contains(cell):
                continue
            g = responsible_guard(lp, cell)
            if (cell[0] - g[0], cell[1] - g[1]) == direction.delta:
                return cell
    raise AssertionError


def test_expand_step_translates_classes():
    lp = LatticePlacement(S, 0)
    step = rotate_square_step(lp, (-1, 0))
    w = Window(-10, 10, -10, 10)
    plan = expand_step(step, (0, 0), w)
    moves = dict(plan.pairs)
    assert moves[(-2, 1)] == (-2, 2)
    for cell in [(3, 1), (-7, 1), (-2, 6), (-2, -4)]:
        assert moves[cell] == (cell[0], cell[1] + 1)
    for cell in [(-3, -1), (2, -1), (-3, 4), (7, 9)]:
        if cell in moves and ((cell[0] + 3) % 5, (cell[1] + 1) % 5) == (0, 0):
            assert moves[cell] == cell


def test_expand_step_role_counts_per_block():
    lp = LatticePlacement(S, 2)
    attack = _attack_with_direction(lp, Direction.LEFT)
    step = rotate_square_step(lp, attack)
    g = responsible_guard(lp, attack)
    w = Window(0, 4, 0, 4)
    plan = expand_step(step, g, w)
    movers = [p for p in plan.pairs if p[0] != p[1]]
    stills = [p for p in plan.pairs if p[0] == p[1]]
    assert len(movers) == 4 and len(stills) == 1


def test_verify_step_in_window_all_cases():
    w = Window(-10, 10, -10, 10)
    for fam in PatternFamily:
        for t in range(5):
            lp = LatticePlacement(fam, t)
            for d in Direction:
                attack = _attack_with_direction(lp, d)
                assert verify_step_in_window(lp, attack, w)


def test_verify_step_negative_control():
    # freezing one mover must break the single-step verification
    lp = LatticePlacement(S, 0)
    attack = (-1, 0)
    g = (0, 0)
    step = rotate_square_step(lp, attack)
    pairs = set(step.local_moves.pairs)
    frozen = next(p for p in pairs if p[0] == (-2, 1))
    pairs.remove(frozen)
    pairs.add(((-2, 1), (-2, 1)))
    import dataclasses

    bad = dataclasses.replace(step, local_moves=move_plan(pairs))
    w = Window(-8, 8, -8, 8)
    plan = expand_step(bad, g, w.inflate(1))
    after = plan.targets()
    inside = {c for c in after if w.contains(c)}
    assert inside != materialize(step.after, w).cells


def test_family_alternates_under_random_attacks():
    lp = LatticePlacement(S, 0)
    rng = SplitMix64(5)
    for _ in range(300):
        cell = (rng.below(17) - 8, rng.below(17) - 8)
        if lp.contains(cell):
            continue
        step = rotate_square_step(lp, cell)
        assert step.after.family is not lp.family
        lp = step.after


def test_case_residues_share_at_most_two_classes():
    # within each case, the four slides plus the still class take at most
    # two residue values, and those agree mod 5
    from eterdom.verify import CASE_ORDER, REFERENCE_CASES

    for key in CASE_ORDER:
        fam, _ = key
        flipped = T if fam is S else S
        residues = set()
        for _, to_off, _, _ in REFERENCE_CASES[key]:
            residues.add(f_value(to_off, flipped))
        assert len(residues) == 1
