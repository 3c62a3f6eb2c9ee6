"""Guard strategies on finite rectangular grids.

Three variants share one core: the symbolic square-rotation step applied to
the grid interior, with the boundary ring absorbing the moves that would
cross the grid edge.

* full boundary: every ring cell permanently holds a guard; ring guards
  shift along their side to trade places with interior guards crossing in
  or out.
* improved: ring sides carry only 3 guards per 5-cell segment, driven by a
  precomputed closed family of 7x7 placements replicated over the grid.
* general: arbitrary dims >= 16 reduce to the largest aligned subgrid
  (both dims = 2 mod 5) running the improved variant, with the leftover
  strips saturated by immovable guards.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .grid import Cell, GridDims, GuardPlacement, MovePlan, Window, move_plan, placement
from .infinite import AttackOnGuard, SymbolicStep, responsible_guard, rotate_square_step
from .pattern import (
    LatticePlacement,
    PatternFamily,
    lattice_cells_in_window,
    pick_max_residue,
)


class BadDimensions(ValueError):
    pass


class AttackOutOfBounds(ValueError):
    pass


class StrategyInvariantError(RuntimeError):
    """The strategy failed to restore its own invariants; carries a state dump."""

    def __init__(self, message: str, dump: Optional[dict] = None):
        super().__init__(message)
        self.dump = dump or {}


class Variant(Enum):
    FULL_BOUNDARY = "full"
    IMPROVED = "improved"
    GENERAL = "general"


@dataclass(frozen=True)
class GameState:
    dims: GridDims
    placement: GuardPlacement
    interior_pattern: LatticePlacement
    variant: Variant
    round: int = 0


class Side(Enum):
    TOP = "top"
    BOTTOM = "bottom"
    LEFT = "left"
    RIGHT = "right"

    def positions(self, dims: GridDims) -> range:
        if self in (Side.TOP, Side.BOTTOM):
            return range(1, dims.n - 1)
        return range(1, dims.m - 1)

    def cell_at(self, dims: GridDims, pos: int) -> Cell:
        if self is Side.TOP:
            return (0, pos)
        if self is Side.BOTTOM:
            return (dims.m - 1, pos)
        if self is Side.LEFT:
            return (pos, 0)
        return (pos, dims.n - 1)

    def pos_of(self, cell: Cell) -> int:
        if self in (Side.TOP, Side.BOTTOM):
            return cell[1]
        return cell[0]


def side_of(dims: GridDims, cell: Cell) -> Side:
    r, c = cell
    corner = (r in (0, dims.m - 1)) and (c in (0, dims.n - 1))
    assert not corner, f"{cell} is a corner"
    if r == 0:
        return Side.TOP
    if r == dims.m - 1:
        return Side.BOTTOM
    if c == 0:
        return Side.LEFT
    assert c == dims.n - 1
    return Side.RIGHT


def interior_window(dims: GridDims) -> Window:
    return Window(1, dims.m - 2, 1, dims.n - 2)


@dataclass(frozen=True)
class LatticeGridStep:
    """A symbolic step projected onto a finite grid's interior.

    ``interior_pairs`` covers every interior guard whose target stays
    interior (still classes included as identities). Guards crossing onto
    the ring appear in ``exits``; successor-lattice interior cells whose
    source sits on the ring appear in ``missing`` and must be filled by a
    ring guard stepping inside.
    """

    guard: Cell
    step: SymbolicStep
    after: LatticePlacement
    interior_pairs: tuple[tuple[Cell, Cell], ...]
    exits: dict[Side, tuple[tuple[Cell, Cell], ...]]
    missing: dict[Side, tuple[tuple[Cell, Cell], ...]]


def lattice_grid_step(dims: GridDims, lp: LatticePlacement, attack: Cell) -> LatticeGridStep:
    g = responsible_guard(lp, attack)
    step = rotate_square_step(lp, attack)
    deltas = step.class_deltas()
    interior = interior_window(dims)

    interior_pairs: list[tuple[Cell, Cell]] = []
    exits: dict[Side, list[tuple[Cell, Cell]]] = {}
    missing: dict[Side, list[tuple[Cell, Cell]]] = {}

    for cell in lattice_cells_in_window(lp, interior):
        d = deltas[((cell[0] - g[0]) % 5, (cell[1] - g[1]) % 5)]
        tgt = (cell[0] + d[0], cell[1] + d[1])
        if interior.contains(tgt):
            interior_pairs.append((cell, tgt))
        else:
            exits.setdefault(side_of(dims, tgt), []).append((cell, tgt))

    for cell in lattice_cells_in_window(step.after, interior):
        src = None
        for cls, d in deltas.items():
            cand = (cell[0] - d[0], cell[1] - d[1])
            if ((cand[0] - g[0]) % 5, (cand[1] - g[1]) % 5) == cls:
                src = cand
                break
        assert src is not None, f"no source for {cell}"
        if not interior.contains(src):
            missing.setdefault(side_of(dims, src), []).append((src, cell))

    return LatticeGridStep(
        guard=g,
        step=step,
        after=step.after,
        interior_pairs=tuple(interior_pairs),
        exits={s: tuple(sorted(v, key=lambda p: s.pos_of(p[1]))) for s, v in exits.items()},
        missing={s: tuple(sorted(v, key=lambda p: s.pos_of(p[0]))) for s, v in missing.items()},
    )


# -- full boundary variant ---------------------------------------------------


def require_full_dims(m: int, n: int) -> None:
    if m < 7 or n < 7 or m % 5 != 2 or n % 5 != 2:
        raise BadDimensions(f"{m}x{n}: both dims must be >= 7 and equal 2 mod 5")


def full_boundary_guard_count(m: int, n: int) -> int:
    return (m - 2) * (n - 2) // 5 + 2 * (m + n) - 4


def init_full_boundary(m: int, n: int) -> GameState:
    require_full_dims(m, n)
    dims = GridDims(m, n)
    lp = LatticePlacement(PatternFamily.STRAIGHT, pick_max_residue(m, n, PatternFamily.STRAIGHT))
    cells = set(lattice_cells_in_window(lp, dims.window())) | set(dims.boundary())
    state = GameState(dims, placement(cells, dims), lp, Variant.FULL_BOUNDARY)
    assert len(state.placement) == full_boundary_guard_count(m, n)
    return state


def _resolve_side_shifts(
    dims: GridDims,
    side: Side,
    exits: tuple[tuple[Cell, Cell], ...],
    missing: tuple[tuple[Cell, Cell], ...],
) -> tuple[list[tuple[Cell, Cell]], set[Cell]]:
    """Ring moves realizing balanced exit/entry events on one side.

    Each entry vacates its ring cell into the interior; the run of ring
    guards between the paired exit and entry points shifts one step toward
    the vacancy, freeing the exit cell for the incoming guard.
    """
    if len(exits) != len(missing):
        raise StrategyInvariantError(
            f"unbalanced boundary crossings on {side}: {len(exits)} out, {len(missing)} in",
            {"exits": exits, "missing": missing},
        )
    pairs: list[tuple[Cell, Cell]] = []
    moved: set[Cell] = set()
    if not exits:
        return pairs, moved
    epos = [side.pos_of(t) for (_, t) in exits]
    mpos = [side.pos_of(s) for (s, _) in missing]
    order = sorted([(p, "e") for p in epos] + [(p, "m") for p in mpos])
    kinds = "".join(k for _, k in order)
    if kinds not in ("em" * len(epos), "me" * len(epos)):
        raise StrategyInvariantError(
            f"crossings do not alternate on {side}: {kinds}",
            {"exits": exits, "missing": missing},
        )
    for (src, target) in missing:
        pairs.append((src, target))
        moved.add(src)
    for e, m in zip(epos, mpos):
        step = 1 if m > e else -1
        for p in range(e, m, step):
            a = side.cell_at(dims, p)
            b = side.cell_at(dims, p + step)
            pairs.append((a, b))
            moved.add(a)
    return pairs, moved


def step_full_boundary(state: GameState, attack: Cell) -> tuple[GameState, MovePlan]:
    dims = state.dims
    if not dims.contains(attack):
        raise AttackOutOfBounds(f"{attack} outside {dims.m}x{dims.n}")
    if attack in state.placement.cells:
        raise AttackOnGuard(f"{attack}")
    lgs = lattice_grid_step(dims, state.interior_pattern, attack)
    pairs: list[tuple[Cell, Cell]] = list(lgs.interior_pairs)
    moved_ring: set[Cell] = set()
    exit_targets: set[Cell] = set()
    for side in Side:
        side_pairs, moved = _resolve_side_shifts(
            dims, side, lgs.exits.get(side, ()), lgs.missing.get(side, ())
        )
        pairs.extend(side_pairs)
        moved_ring |= moved
        for cell, tgt in lgs.exits.get(side, ()):
            pairs.append((cell, tgt))
            exit_targets.add(tgt)
    for ring_cell in dims.boundary():
        if ring_cell not in moved_ring:
            pairs.append((ring_cell, ring_cell))

    plan = move_plan(pairs)
    after_cells = set(lattice_cells_in_window(lgs.after, interior_window(dims)))
    after_cells |= set(dims.boundary())
    targets = plan.targets()
    if len(plan) != len(state.placement) or targets != after_cells:
        raise StrategyInvariantError(
            "boundary shift resolution failed to realize the successor placement",
            {
                "round": state.round,
                "attack": attack,
                "pattern": (state.interior_pattern.family.value, state.interior_pattern.t),
                "extra": sorted(targets - after_cells),
                "absent": sorted(after_cells - targets),
            },
        )
    next_state = GameState(
        dims, placement(after_cells, dims), lgs.after, state.variant, state.round + 1
    )
    return next_state, plan


# -- improved variant (partial boundary cover) -------------------------------


def improved_guard_count(m: int, n: int) -> int:
    return (m - 2) * (n - 2) // 5 + 4 + 3 * ((m - 2) // 5 + (n - 2) // 5) * 2


def to_local(dims: GridDims, cell: Cell) -> Cell:
    """Collapse an m-by-n cell to its 7x7 representative (period-5 core)."""
    r, c = cell
    lr = 0 if r == 0 else 6 if r == dims.m - 1 else 1 + (r - 1) % 5
    lc = 0 if c == 0 else 6 if c == dims.n - 1 else 1 + (c - 1) % 5
    return (lr, lc)


_LOCAL_DIMS = GridDims(7, 7)
_LOCAL_INTERIOR = Window(1, 5, 1, 5)


def _replicate_cell_translations(dims: GridDims):
    row_blocks = (dims.m - 2) // 5
    col_blocks = (dims.n - 2) // 5
    return row_blocks, col_blocks


def replicate_placement_cells(local_cells: frozenset[Cell], dims: GridDims) -> frozenset[Cell]:
    """Tile a 7x7 placement over an m-by-n grid (dims = 2 mod 5)."""
    row_blocks, col_blocks = _replicate_cell_translations(dims)
    out: set[Cell] = set()
    for (r, c) in local_cells:
        r_core = 1 <= r <= 5
        c_core = 1 <= c <= 5
        rows = (
            [r + 5 * i for i in range(row_blocks)]
            if r_core
            else [0 if r == 0 else dims.m - 1]
        )
        cols = (
            [c + 5 * j for j in range(col_blocks)]
            if c_core
            else [0 if c == 0 else dims.n - 1]
        )
        for rr in rows:
            for cc in cols:
                out.add((rr, cc))
    return frozenset(out)


def replicate_plan(local_plan: MovePlan, dims: GridDims) -> MovePlan:
    """Tile a 7x7 move plan over the grid: interior pairs repeat per 5x5
    block, side pairs repeat per 5-cell segment, corner pairs stay put."""
    row_blocks, col_blocks = _replicate_cell_translations(dims)
    pairs: list[tuple[Cell, Cell]] = []
    for (a, b) in sorted(local_plan.pairs):
        ar, ac = a
        if 1 <= ar <= 5 and 1 <= ac <= 5:
            for i in range(row_blocks):
                for j in range(col_blocks):
                    pairs.append(
                        ((ar + 5 * i, ac + 5 * j), (b[0] + 5 * i, b[1] + 5 * j))
                    )
        elif (ar in (0, 6)) and (ac in (0, 6)):
            rr = 0 if ar == 0 else dims.m - 1
            cc = 0 if ac == 0 else dims.n - 1
            pairs.append(((rr, cc), (rr, cc)))
        elif ar in (0, 6):
            rr = 0 if ar == 0 else dims.m - 1
            br = b[0] if b[0] <= 1 else b[0] + (dims.m - 7)
            for j in range(col_blocks):
                pairs.append(((rr, ac + 5 * j), (br, b[1] + 5 * j)))
        else:
            cc = 0 if ac == 0 else dims.n - 1
            bc = b[1] if b[1] <= 1 else b[1] + (dims.n - 7)
            for i in range(row_blocks):
                pairs.append(((ar + 5 * i, cc), (b[0] + 5 * i, bc)))
    return move_plan(pairs)


def _load_catalogue():
    from . import catalogue

    return catalogue.load_default()


def init_improved(m: int, n: int) -> GameState:
    require_full_dims(m, n)
    dims = GridDims(m, n)
    cat = _load_catalogue()
    t = pick_max_residue(m, n, PatternFamily.STRAIGHT)
    lp = LatticePlacement(PatternFamily.STRAIGHT, t)
    cells = replicate_placement_cells(cat.placements[cat.slot_id(lp)], dims)
    state = GameState(dims, placement(cells, dims), lp, Variant.IMPROVED)
    assert len(state.placement) == improved_guard_count(m, n)
    return state


def step_improved(state: GameState, attack: Cell) -> tuple[GameState, MovePlan]:
    dims = state.dims
    if not dims.contains(attack):
        raise AttackOutOfBounds(f"{attack} outside {dims.m}x{dims.n}")
    if attack in state.placement.cells:
        raise AttackOnGuard(f"{attack}")
    cat = _load_catalogue()
    slot = cat.slot_id(state.interior_pattern)
    local = to_local(dims, attack)
    to_slot, local_plan = cat.transitions[(slot, local)]
    plan = replicate_plan(local_plan, dims)
    after_cells = replicate_placement_cells(cat.placements[to_slot], dims)
    targets = plan.targets()
    if len(plan) != len(state.placement) or targets != after_cells:
        raise StrategyInvariantError(
            "replicated plan does not realize the successor placement",
            {"round": state.round, "attack": attack, "slot": slot, "local": local},
        )
    next_state = GameState(
        dims,
        placement(after_cells, dims),
        cat.slot_pattern(to_slot),
        state.variant,
        state.round + 1,
    )
    return next_state, plan


# -- general dims ------------------------------------------------------------


def general_subgrid(m: int, n: int) -> GridDims:
    """Largest subgrid anchored at the origin with both dims = 2 mod 5."""
    sub_m = m - (m - 2) % 5
    sub_n = n - (n - 2) % 5
    return GridDims(sub_m, sub_n)


def init_general(m: int, n: int) -> GameState:
    if m < 16 or n < 16:
        raise BadDimensions(f"{m}x{n}: general variant requires both dims >= 16")
    dims = GridDims(m, n)
    sub = general_subgrid(m, n)
    inner = init_improved(sub.m, sub.n)
    strip_cells = {
        (r, c)
        for r in range(m)
        for c in range(n)
        if r >= sub.m or c >= sub.n
    }
    cells = set(inner.placement.cells) | strip_cells
    return GameState(dims, placement(cells, dims), inner.interior_pattern, Variant.GENERAL)


def step_general(state: GameState, attack: Cell) -> tuple[GameState, MovePlan]:
    dims = state.dims
    if not dims.contains(attack):
        raise AttackOutOfBounds(f"{attack} outside {dims.m}x{dims.n}")
    if attack in state.placement.cells:
        raise AttackOnGuard(f"{attack}")
    sub = general_subgrid(dims.m, dims.n)
    # saturated strips are never attackable, so the attack is in the subgrid
    assert attack[0] < sub.m and attack[1] < sub.n
    strip_cells = {c for c in state.placement.cells if c[0] >= sub.m or c[1] >= sub.n}
    sub_state = GameState(
        sub,
        placement(state.placement.cells - strip_cells, sub),
        state.interior_pattern,
        Variant.IMPROVED,
        state.round,
    )
    nxt, plan = step_improved(sub_state, attack)
    pairs = set(plan.pairs) | {(c, c) for c in strip_cells}
    next_state = GameState(
        dims,
        placement(set(nxt.placement.cells) | strip_cells, dims),
        nxt.interior_pattern,
        Variant.GENERAL,
        state.round + 1,
    )
    return next_state, move_plan(pairs)


def init_state(variant: Variant, m: int, n: int) -> GameState:
    if variant is Variant.FULL_BOUNDARY:
        return init_full_boundary(m, n)
    if variant is Variant.IMPROVED:
        return init_improved(m, n)
    return init_general(m, n)


def step_state(state: GameState, attack: Cell) -> tuple[GameState, MovePlan]:
    if state.variant is Variant.FULL_BOUNDARY:
        return step_full_boundary(state, attack)
    if state.variant is Variant.IMPROVED:
        return step_improved(state, attack)
    return step_general(state, attack)
