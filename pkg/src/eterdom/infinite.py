"""Symbolic guard strategies on the unbounded grid.

The unbounded grid is never stored. A guard configuration is a (family,
residue) pair; one defensive turn is a symbolic step whose correctness is
checked by materializing a finite window around the attack. Two strategies
live here: the plain shift (every guard slides the same direction) and the
square rotation (four guards wheel around an adjacent empty 2x2 block while
one class of guards stands still, repeated on the period-5 lattice).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .grid import (
    Cell,
    MovePlan,
    Window,
    dominates_region,
    move_plan,
    placement,
    validate_move_plan,
)
from .pattern import LatticePlacement, PatternFamily, f_value, materialize


class Direction(Enum):
    UP = (-1, 0)
    DOWN = (1, 0)
    LEFT = (0, -1)
    RIGHT = (0, 1)

    @property
    def delta(self) -> Cell:
        return self.value


class AttackOnGuard(ValueError):
    """The attacked cell already holds a guard; the game forbids this."""


@dataclass(frozen=True)
class EmptySquare:
    """A guard-free 2x2 block next to a lattice guard.

    ``anchor`` is the block's top-left cell; four such blocks surround every
    guard, indexed 0..3. ``primed`` tags the transposed family's blocks.
    """

    anchor: Cell
    index: int
    primed: bool

    def cells(self) -> tuple[Cell, Cell, Cell, Cell]:
        r, c = self.anchor
        return ((r, c), (r, c + 1), (r + 1, c), (r + 1, c + 1))


# Block anchors relative to the guard, by family and index. The transposed
# family's index-2 block is derived as the unique all-empty 2x2 block to the
# guard's left (the published listing of that block repeats a cell).
_SQUARE_ANCHORS: dict[PatternFamily, tuple[Cell, Cell, Cell, Cell]] = {
    PatternFamily.STRAIGHT: ((-1, 1), (1, 0), (0, -2), (-2, -1)),
    PatternFamily.TRANSPOSED: ((0, 1), (1, -1), (-1, -2), (-2, 0)),
}

# The empty square containing each possible attack cell (the guard's four
# neighbors fall in four distinct squares).
_ATTACK_SQUARE_INDEX: dict[Direction, int] = {
    Direction.UP: 3,
    Direction.DOWN: 1,
    Direction.LEFT: 2,
    Direction.RIGHT: 0,
}

# Rotation moves relative to the responsible guard: four (from, to) slides
# plus the model cell of the class that stands still. Every lattice guard
# falls in exactly one of the five residue classes these cells represent.
_ROTATIONS: dict[tuple[PatternFamily, Direction], tuple[tuple[tuple[Cell, Cell], ...], Cell]] = {
    (PatternFamily.STRAIGHT, Direction.UP): (
        (((0, 0), (-1, 0)), ((-2, 1), (-2, 2)), ((-1, 3), (0, 3)), ((1, 2), (1, 1))),
        (-3, -1),
    ),
    (PatternFamily.STRAIGHT, Direction.LEFT): (
        (((0, 0), (0, -1)), ((-1, -2), (-2, -2)), ((-3, -1), (-3, 0)), ((-2, 1), (-1, 1))),
        (1, 2),
    ),
    (PatternFamily.STRAIGHT, Direction.DOWN): (
        (((0, 0), (1, 0)), ((2, -1), (2, -2)), ((1, -3), (0, -3)), ((-1, -2), (-1, -1))),
        (-2, 1),
    ),
    (PatternFamily.STRAIGHT, Direction.RIGHT): (
        (((0, 0), (0, 1)), ((1, 2), (2, 2)), ((3, 1), (3, 0)), ((2, -1), (1, -1))),
        (-1, 3),
    ),
    (PatternFamily.TRANSPOSED, Direction.UP): (
        (((0, 0), (-1, 0)), ((-2, -1), (-2, -2)), ((-1, -3), (0, -3)), ((1, -2), (1, -1))),
        (-3, 1),
    ),
    (PatternFamily.TRANSPOSED, Direction.LEFT): (
        (((0, 0), (0, -1)), ((2, 1), (1, 1)), ((3, -1), (3, 0)), ((1, -2), (2, -2))),
        (-1, 2),
    ),
    (PatternFamily.TRANSPOSED, Direction.DOWN): (
        (((0, 0), (1, 0)), ((2, 1), (2, 2)), ((1, 3), (0, 3)), ((-1, 2), (-1, 1))),
        (-2, -1),
    ),
    (PatternFamily.TRANSPOSED, Direction.RIGHT): (
        (((0, 0), (0, 1)), ((-1, 2), (-2, 2)), ((-3, 1), (-3, 0)), ((-2, -1), (-1, -1))),
        (1, 3),
    ),
}


@dataclass(frozen=True)
class SymbolicStep:
    """One defensive turn, in coordinates relative to the responsible guard."""

    before: LatticePlacement
    attack_offset: Cell
    after: LatticePlacement
    pattern_square: EmptySquare
    local_moves: MovePlan

    def class_deltas(self) -> dict[Cell, Cell]:
        """Residue class (mod 5 offset from the guard) -> displacement."""
        out: dict[Cell, Cell] = {}
        for (fr, to) in self.local_moves.pairs:
            out[(fr[0] % 5, fr[1] % 5)] = (to[0] - fr[0], to[1] - fr[1])
        return out


def empty_squares(family: PatternFamily, guard: Cell) -> tuple[EmptySquare, ...]:
    """The four guard-free 2x2 blocks around a lattice guard, indexed 0..3."""
    t = f_value(guard, family)
    primed = family is PatternFamily.TRANSPOSED
    out = []
    for idx, (ar, ac) in enumerate(_SQUARE_ANCHORS[family]):
        sq = EmptySquare((guard[0] + ar, guard[1] + ac), idx, primed)
        for cell in sq.cells():
            if f_value(cell, family) == t:
                raise AssertionError(f"square {idx} around {guard} not empty at {cell}")
        out.append(sq)
    return tuple(out)


def responsible_guard(lp: LatticePlacement, attack: Cell) -> Cell:
    """The unique lattice neighbor of an unguarded cell; perfect domination."""
    if lp.contains(attack):
        raise AttackOnGuard(f"{attack} holds a guard")
    r, c = attack
    found = [
        nb
        for nb in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1))
        if lp.contains(nb)
    ]
    assert len(found) == 1, f"perfect domination violated at {attack}: {found}"
    return found[0]


def shift_step(lp: LatticePlacement, attack: Cell) -> tuple[LatticePlacement, Direction]:
    """Everyone slides one step toward the attack; stays in the straight family."""
    if lp.family is not PatternFamily.STRAIGHT:
        raise ValueError("shift strategy is defined on the straight family")
    g = responsible_guard(lp, attack)
    delta = (attack[0] - g[0], attack[1] - g[1])
    direction = Direction(delta)
    new_t = f_value(attack, lp.family)
    return LatticePlacement(lp.family, new_t), direction


def rotate_square_step(lp: LatticePlacement, attack: Cell) -> SymbolicStep:
    """One square-rotation turn answering an attack on an unguarded cell."""
    g = responsible_guard(lp, attack)
    delta = (attack[0] - g[0], attack[1] - g[1])
    direction = Direction(delta)
    attack_square = _ATTACK_SQUARE_INDEX[direction]
    if lp.family is PatternFamily.STRAIGHT:
        pattern_idx = (attack_square + 1) % 4
    else:
        pattern_idx = (attack_square - 1) % 4
    pattern_sq_abs = empty_squares(lp.family, g)[pattern_idx]

    moves, still = _ROTATIONS[(lp.family, direction)]
    after_family = lp.family.flipped()
    after_t = f_value(attack, after_family)
    after = LatticePlacement(after_family, after_t)

    # Sanity: every rotated target and the still class sit on the new lattice.
    for (_, to) in moves:
        assert f_value((g[0] + to[0], g[1] + to[1]), after_family) == after_t
    assert f_value((g[0] + still[0], g[1] + still[1]), after_family) == after_t
    # The pattern square stays empty through the turn.
    for cell in pattern_sq_abs.cells():
        assert f_value(cell, lp.family) != lp.t
        assert f_value(cell, after_family) != after_t

    rel_anchor = (
        pattern_sq_abs.anchor[0] - g[0],
        pattern_sq_abs.anchor[1] - g[1],
    )
    local_pairs = list(moves) + [(still, still)]
    return SymbolicStep(
        before=lp,
        attack_offset=delta,
        after=after,
        pattern_square=EmptySquare(rel_anchor, pattern_sq_abs.index, pattern_sq_abs.primed),
        local_moves=move_plan(local_pairs),
    )


def expand_step(step: SymbolicStep, g: Cell, w: Window) -> MovePlan:
    """The full plan on a window: each residue class repeats its model move."""
    deltas = step.class_deltas()
    pairs = []
    for cell in materialize(step.before, w).cells:
        cls = ((cell[0] - g[0]) % 5, (cell[1] - g[1]) % 5)
        d = deltas[cls]
        pairs.append((cell, (cell[0] + d[0], cell[1] + d[1])))
    return move_plan(pairs)


def verify_step_in_window(lp: LatticePlacement, attack: Cell, w: Window) -> bool:
    """Materialized single-step check: legality, lattice agreement, domination.

    The plan is expanded on a one-cell-inflated window so that guards crossing
    the window edge are accounted for; inside ``w`` the moved guards must form
    exactly the successor lattice, and the margin-2 interior must stay
    dominated.
    """
    margin = min(
        attack[0] - w.row_lo, w.row_hi - attack[0], attack[1] - w.col_lo, w.col_hi - attack[1]
    )
    if margin < 4:
        raise ValueError("window must leave at least 4 cells of margin around the attack")
    g = responsible_guard(lp, attack)
    step = rotate_square_step(lp, attack)

    w1 = w.inflate(1)
    w2 = w.inflate(2)
    plan = expand_step(step, g, w1)
    before_p = placement(materialize(lp, w1).cells, w2)
    after_cells = plan.targets()
    after_p = placement(after_cells, w2)
    verdict = validate_move_plan(before_p, plan, attack, after_p)
    if not verdict.ok:
        return False
    inside = {c for c in after_cells if w.contains(c)}
    if inside != materialize(step.after, w).cells:
        return False
    if not dominates_region(inside, w.shrink(2)):
        return False
    # The pattern square is guard-free on both sides of the turn.
    anchor = (g[0] + step.pattern_square.anchor[0], g[1] + step.pattern_square.anchor[1])
    for cell in EmptySquare(anchor, step.pattern_square.index, step.pattern_square.primed).cells():
        if cell in before_p.cells or cell in inside:
            return False
    return True
