"""Grid geometry, domination predicates, and move-plan legality.

Cells are ``(row, col)`` integer pairs. Row x sits above row x+1 and column
y left of column y+1. Coordinates are signed so work on the unbounded grid
(negative rows/cols around an origin) is representable directly; a cell is
only range-checked once it is bound to a finite grid or window.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional, Union

Cell = tuple[int, int]

ORTHOGONAL: tuple[Cell, ...] = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True, slots=True)
class GridDims:
    """A finite m-by-n grid: rows 0..m-1, cols 0..n-1."""

    m: int
    n: int

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ValueError(f"grid dims must be positive, got {self.m}x{self.n}")

    def window(self) -> "Window":
        return Window(0, self.m - 1, 0, self.n - 1)

    def contains(self, c: Cell) -> bool:
        return 0 <= c[0] < self.m and 0 <= c[1] < self.n

    def cells(self) -> Iterator[Cell]:
        for r in range(self.m):
            for c in range(self.n):
                yield (r, c)

    def corners(self) -> frozenset[Cell]:
        return frozenset(
            {(0, 0), (0, self.n - 1), (self.m - 1, 0), (self.m - 1, self.n - 1)}
        )

    def boundary(self) -> frozenset[Cell]:
        """All boundary cells, corners included."""
        ring = set()
        for c in range(self.n):
            ring.add((0, c))
            ring.add((self.m - 1, c))
        for r in range(self.m):
            ring.add((r, 0))
            ring.add((r, self.n - 1))
        return frozenset(ring)


@dataclass(frozen=True, slots=True)
class Window:
    """An inclusive rectangle of cells, anywhere on the unbounded grid."""

    row_lo: int
    row_hi: int
    col_lo: int
    col_hi: int

    def __post_init__(self) -> None:
        if self.row_lo > self.row_hi or self.col_lo > self.col_hi:
            raise ValueError(f"empty window {self}")

    def contains(self, c: Cell) -> bool:
        return self.row_lo <= c[0] <= self.row_hi and self.col_lo <= c[1] <= self.col_hi

    def contains_window(self, other: "Window") -> bool:
        return (
            self.row_lo <= other.row_lo
            and other.row_hi <= self.row_hi
            and self.col_lo <= other.col_lo
            and other.col_hi <= self.col_hi
        )

    def cells(self) -> Iterator[Cell]:
        for r in range(self.row_lo, self.row_hi + 1):
            for c in range(self.col_lo, self.col_hi + 1):
                yield (r, c)

    def shrink(self, k: int) -> "Window":
        return Window(self.row_lo + k, self.row_hi - k, self.col_lo + k, self.col_hi - k)

    def inflate(self, k: int) -> "Window":
        return self.shrink(-k)

    @property
    def num_rows(self) -> int:
        return self.row_hi - self.row_lo + 1

    @property
    def num_cols(self) -> int:
        return self.col_hi - self.col_lo + 1

    @property
    def area(self) -> int:
        return self.num_rows * self.num_cols


Bound = Union[GridDims, Window, None]


def as_window(bound: Bound) -> Optional[Window]:
    if bound is None:
        return None
    if isinstance(bound, GridDims):
        return bound.window()
    return bound


def closed_neighborhood(c: Cell, bound: Bound = None) -> set[Cell]:
    """The cell plus its orthogonal neighbors, clipped to ``bound`` if given."""
    w = as_window(bound)
    out = {c}
    r, col = c
    for dr, dc in ORTHOGONAL:
        nb = (r + dr, col + dc)
        if w is None or w.contains(nb):
            out.add(nb)
    if w is not None and not w.contains(c):
        out.discard(c)
    return out


@dataclass(frozen=True)
class GuardPlacement:
    """A set of distinct guard cells bound to a finite grid or window."""

    cells: frozenset[Cell]
    bound: Union[GridDims, Window]

    def __post_init__(self) -> None:
        w = as_window(self.bound)
        assert w is not None
        for c in self.cells:
            if not w.contains(c):
                raise ValueError(f"cell {c} outside bound {self.bound}")

    def __len__(self) -> int:
        return len(self.cells)

    def __contains__(self, c: Cell) -> bool:
        return c in self.cells


def placement(cells, bound: Union[GridDims, Window]) -> GuardPlacement:
    return GuardPlacement(frozenset(cells), bound)


from functools import lru_cache


@lru_cache(maxsize=64)
def _window_cell_set(row_lo: int, row_hi: int, col_lo: int, col_hi: int) -> frozenset[Cell]:
    return frozenset(
        (r, c) for r in range(row_lo, row_hi + 1) for c in range(col_lo, col_hi + 1)
    )


def dominates_region(cells: frozenset[Cell] | set[Cell], region: Window) -> bool:
    """True iff every cell of ``region`` is in ``cells`` or adjacent to one."""
    cover = set(cells)
    cover.update((r - 1, c) for r, c in cells)
    cover.update((r + 1, c) for r, c in cells)
    cover.update((r, c - 1) for r, c in cells)
    cover.update((r, c + 1) for r, c in cells)
    return _window_cell_set(region.row_lo, region.row_hi, region.col_lo, region.col_hi) <= cover


def is_dominating(p: GuardPlacement) -> bool:
    w = as_window(p.bound)
    assert w is not None
    return dominates_region(p.cells, w)


def is_perfect_on(p: GuardPlacement, region: Window) -> bool:
    """True iff every cell of ``region`` has exactly one guard in N[cell]."""
    bound_w = as_window(p.bound)
    assert bound_w is not None
    if not bound_w.contains_window(region):
        raise ValueError(f"region {region} not inside bound {p.bound}")
    cells = p.cells
    for r in range(region.row_lo, region.row_hi + 1):
        for c in range(region.col_lo, region.col_hi + 1):
            n = ((r, c) in cells) + ((r - 1, c) in cells) + ((r + 1, c) in cells)
            n += ((r, c - 1) in cells) + ((r, c + 1) in cells)
            if n != 1:
                return False
    return True


@dataclass(frozen=True)
class MovePlan:
    """A set of (from, to) guard moves; legal plans are bijections with step <= 1."""

    pairs: frozenset[tuple[Cell, Cell]]

    def sources(self) -> frozenset[Cell]:
        return frozenset(a for a, _ in self.pairs)

    def targets(self) -> frozenset[Cell]:
        return frozenset(b for _, b in self.pairs)

    def __len__(self) -> int:
        return len(self.pairs)


def move_plan(pairs) -> MovePlan:
    return MovePlan(frozenset(pairs))


class MoveRejection(Enum):
    NOT_BIJECTIVE = "NOT_BIJECTIVE"
    DISTANCE_EXCEEDED = "DISTANCE_EXCEEDED"
    ATTACK_UNCOVERED = "ATTACK_UNCOVERED"
    CELL_OUT_OF_BOUNDS = "CELL_OUT_OF_BOUNDS"
    DUPLICATE_OCCUPANCY = "DUPLICATE_OCCUPANCY"


@dataclass(frozen=True)
class PlanVerdict:
    ok: bool
    reason: Optional[MoveRejection] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


def _step_distance_ok(a: Cell, b: Cell) -> bool:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) <= 1


def validate_move_plan(
    before: GuardPlacement,
    plan: MovePlan,
    attack: Cell,
    after_expected: GuardPlacement,
) -> PlanVerdict:
    """Single legality oracle for one guards' turn.

    Accepts iff the plan is a bijection from ``before`` onto ``after_expected``,
    every move has graph distance <= 1, and the attacked cell ends covered.
    Rejections carry a reason code so audits can count failure modes.
    """
    bound_w = as_window(after_expected.bound)
    assert bound_w is not None
    sources = [a for a, _ in plan.pairs]
    targets = [b for _, b in plan.pairs]
    for cell in sources + targets:
        if not bound_w.contains(cell):
            return PlanVerdict(False, MoveRejection.CELL_OUT_OF_BOUNDS, f"{cell}")
    if len(set(targets)) != len(targets):
        seen: set[Cell] = set()
        dup = next(b for b in targets if b in seen or seen.add(b))  # type: ignore[func-returns-value]
        return PlanVerdict(False, MoveRejection.DUPLICATE_OCCUPANCY, f"{dup}")
    if len(set(sources)) != len(sources):
        return PlanVerdict(False, MoveRejection.NOT_BIJECTIVE, "duplicate source")
    if set(sources) != set(before.cells):
        return PlanVerdict(False, MoveRejection.NOT_BIJECTIVE, "sources != before")
    if set(targets) != set(after_expected.cells):
        return PlanVerdict(False, MoveRejection.NOT_BIJECTIVE, "targets != after")
    for a, b in plan.pairs:
        if not _step_distance_ok(a, b):
            return PlanVerdict(False, MoveRejection.DISTANCE_EXCEEDED, f"{a}->{b}")
    if attack not in after_expected.cells:
        return PlanVerdict(False, MoveRejection.ATTACK_UNCOVERED, f"{attack}")
    return PlanVerdict(True)


def max_step_matching(sources: list[Cell], target_set: frozenset[Cell] | set[Cell]) -> dict[Cell, Cell]:
    """Maximum bipartite matching where a source may map to any target at distance <= 1.

    Augmenting-path search (Kuhn). Returns a source -> target assignment of
    maximum cardinality; deterministic for a fixed source order.
    """
    match_of_target: dict[Cell, Cell] = {}
    match_of_source: dict[Cell, Cell] = {}

    def candidates(s: Cell) -> list[Cell]:
        r, c = s
        out = []
        for cand in ((r, c), (r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if cand in target_set:
                out.append(cand)
        return out

    def try_augment(s: Cell, visited: set[Cell]) -> bool:
        for t in candidates(s):
            if t in visited:
                continue
            visited.add(t)
            owner = match_of_target.get(t)
            if owner is None or try_augment(owner, visited):
                match_of_target[t] = s
                match_of_source[s] = t
                return True
        return False

    for s in sources:
        try_augment(s, set())
    return match_of_source


def transition_exists(before: GuardPlacement, attack: Cell, after: GuardPlacement) -> bool:
    """True iff a bijection before -> after exists with every move at distance <= 1.

    Decided by bipartite maximum matching reaching full cardinality. The
    attacked cell must already be a member of ``after`` (and not of ``before``).
    """
    if len(before.cells) != len(after.cells):
        raise ValueError("placements must have equal guard counts")
    if attack in before.cells or attack not in after.cells:
        raise ValueError("attack must be uncovered before and covered after")
    sources = sorted(before.cells)
    matched = max_step_matching(sources, after.cells)
    return len(matched) == len(sources)


def find_transition_plan(
    before: GuardPlacement, attack: Cell, after: GuardPlacement
) -> Optional[MovePlan]:
    """Like :func:`transition_exists` but returns one witnessing plan."""
    sources = sorted(before.cells)
    matched = max_step_matching(sources, after.cells)
    if len(matched) != len(sources):
        return None
    return move_plan(matched.items())


def render_cells(
    cells: frozenset[Cell] | set[Cell],
    window: Window,
    attack: Optional[Cell] = None,
) -> str:
    """Text rendering: one line per row, '#' = guard, '.' = empty, '!' = attacked."""
    lines = []
    for r in range(window.row_lo, window.row_hi + 1):
        row = []
        for c in range(window.col_lo, window.col_hi + 1):
            if attack is not None and (r, c) == attack:
                row.append("!")
            elif (r, c) in cells:
                row.append("#")
            else:
                row.append(".")
        lines.append("".join(row))
    return "\n".join(lines)


def render_placement(p: GuardPlacement, attack: Optional[Cell] = None) -> str:
    w = as_window(p.bound)
    assert w is not None
    return render_cells(p.cells, w, attack)
