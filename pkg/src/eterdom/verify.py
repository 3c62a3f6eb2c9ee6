"""Cross-check experiments behind the `verify` and `count` commands.

The rotation strategy's eight defense cases circulate with hand-written
residue tables. This module keeps a transcription of those tables purely as
an independent cross-check: every residue is recomputed from the move
geometry, and disagreements are reported as reconciled misprints (two are
known) rather than trusted. The single-step window verifier and the
counting-bound sweep back the remaining claims computationally.
"""

from __future__ import annotations

from dataclasses import dataclass

from .finite import init_general
from .grid import Cell, Window
from .infinite import Direction, responsible_guard, verify_step_in_window
from .pattern import (
    LatticePlacement,
    PatternFamily,
    count_restriction,
    materialize,
)

# Transcribed rows of the eight published defense-case tables: for each
# family and attack direction, the four slides plus the still class, with
# the residue expression exactly as printed (coefficients of the guard's
# row, col, and an additive constant). Straight-family rows print the
# transposed form (2*row + col + c); transposed rows print the straight
# form (row + 2*col + c). Two entries are misprints, kept verbatim.
_CaseRow = tuple[Cell, Cell, tuple[int, int, int], str]

REFERENCE_CASES: dict[tuple[PatternFamily, Direction], tuple[_CaseRow, ...]] = {
    (PatternFamily.STRAIGHT, Direction.UP): (
        ((0, 0), (-1, 0), (2, 1, -2), "2x + y - 2"),
        ((-2, 1), (-2, 2), (2, 1, -2), "2x + y - 2"),
        ((-1, 3), (0, 3), (2, 1, 3), "2x + y + 3"),
        ((1, 2), (1, 1), (2, 1, 3), "2x + y + 3"),
        ((-3, -1), (-3, -1), (2, 1, -2), "2x + y - 2"),
    ),
    (PatternFamily.STRAIGHT, Direction.LEFT): (
        ((0, 0), (0, -1), (2, 1, -1), "2x + y - 1"),
        ((-1, -2), (-2, -2), (2, 1, -1), "2x + y - 1"),
        ((-3, -1), (-3, 0), (2, 1, -1), "2x + y - 1"),
        ((-2, 1), (-1, 1), (2, 1, -1), "2x + y - 1"),
        ((1, 2), (1, 2), (2, 1, 4), "2x + y + 4"),
    ),
    (PatternFamily.STRAIGHT, Direction.DOWN): (
        ((0, 0), (1, 0), (2, 1, 2), "2x + y + 2"),
        ((2, -1), (2, -2), (2, 1, 2), "2x + y + 2"),
        ((1, -3), (0, -3), (2, 1, -3), "2x + y - 3"),
        ((-1, -2), (-1, -1), (2, 1, -3), "2x + y - 3"),
        ((-2, 1), (-2, 1), (2, 1, -3), "2x + y - 3"),
    ),
    (PatternFamily.STRAIGHT, Direction.RIGHT): (
        ((0, 0), (0, 1), (2, 1, 1), "2x + y + 1"),
        ((1, 2), (2, 2), (2, 1, 1), "2x + y + 1"),
        ((3, 1), (3, 0), (2, 1, 1), "2x + y + 1"),
        ((2, -1), (1, -1), (2, 1, 1), "2x + y + 1"),
        ((-1, 3), (-1, 3), (2, 1, 1), "2x + y + 1"),
    ),
    (PatternFamily.TRANSPOSED, Direction.UP): (
        ((0, 0), (-1, 0), (1, 2, -1), "x + 2y - 1"),
        ((-2, -1), (-2, -2), (1, 2, -1), "x + 2y - 1"),
        ((-1, -3), (0, -3), (1, 2, -1), "x + 2y - 1"),
        ((1, -2), (1, -1), (1, 2, -1), "x + 2y - 1"),
        ((-3, 1), (-3, 1), (1, 2, -1), "x + 2y - 1"),
    ),
    (PatternFamily.TRANSPOSED, Direction.LEFT): (
        ((0, 0), (0, -1), (1, 2, -2), "x + 2y - 2"),
        ((2, 1), (1, 1), (1, 2, 3), "x + 2y + 3"),
        ((3, -1), (3, 0), (1, 2, 3), "x + 2y + 3"),
        ((1, -2), (2, -2), (1, 2, -2), "x + 2y - 2"),
        ((-1, 2), (-1, 2), (1, 2, 3), "x + 2y + 3"),
    ),
    (PatternFamily.TRANSPOSED, Direction.DOWN): (
        ((0, 0), (1, 0), (1, 2, 1), "x + 2y + 1"),
        ((2, 1), (2, 2), (1, 2, 1), "x + 2y + 1"),
        ((1, 3), (0, 3), (1, 1, 1), "x + y + 1"),
        ((-1, 2), (-1, 1), (1, 2, 1), "x + 2y + 1"),
        ((-2, -1), (-2, -1), (1, 2, -4), "x + 2y - 4"),
    ),
    (PatternFamily.TRANSPOSED, Direction.RIGHT): (
        ((0, 0), (0, 1), (1, 2, 2), "x + 2y + 2"),
        ((-1, 2), (-2, 2), (1, 2, 2), "x + 2y + 2"),
        ((-3, 1), (-3, 0), (1, 2, -3), "x + 2y - 3"),
        ((-2, -1), (-1, -1), (1, 2, -3), "x + 2y + -3"),
        ((1, 3), (1, 3), (1, 2, 2), "x + 2y + 2"),
    ),
}

CASE_ORDER: tuple[tuple[PatternFamily, Direction], ...] = (
    (PatternFamily.STRAIGHT, Direction.UP),
    (PatternFamily.STRAIGHT, Direction.LEFT),
    (PatternFamily.STRAIGHT, Direction.DOWN),
    (PatternFamily.STRAIGHT, Direction.RIGHT),
    (PatternFamily.TRANSPOSED, Direction.UP),
    (PatternFamily.TRANSPOSED, Direction.LEFT),
    (PatternFamily.TRANSPOSED, Direction.DOWN),
    (PatternFamily.TRANSPOSED, Direction.RIGHT),
)


@dataclass(frozen=True)
class TableCheck:
    case_no: int
    family: str
    direction: str
    from_offset: Cell
    to_offset: Cell
    claimed: tuple[int, int, int]
    computed: tuple[int, int, int]
    printed: str
    status: str  # ok | misprint_value | misprint_format


def verify_tables() -> list[TableCheck]:
    """Recompute every table residue from the move geometry and classify
    each printed entry as consistent or a reconciled misprint."""
    out: list[TableCheck] = []
    for case_no, key in enumerate(CASE_ORDER, start=1):
        family, direction = key
        for from_off, to_off, claimed, printed in REFERENCE_CASES[key]:
            if family is PatternFamily.STRAIGHT:
                computed = (2, 1, 2 * to_off[0] + to_off[1])
            else:
                computed = (1, 2, to_off[0] + 2 * to_off[1])
            if (claimed[0], claimed[1]) != (computed[0], computed[1]) or (
                claimed[2] - computed[2]
            ) % 5 != 0:
                status = "misprint_value"
            elif "+ -" in printed:
                status = "misprint_format"
            else:
                status = "ok"
            out.append(
                TableCheck(
                    case_no,
                    family.value,
                    direction.name.lower(),
                    from_off,
                    to_off,
                    claimed,
                    computed,
                    printed,
                    status,
                )
            )
    return out


def tables_reconciled(checks: list[TableCheck]) -> bool:
    """All rows either agree or are one of the two known misprints."""
    anomalies = [c for c in checks if c.status != "ok"]
    return len(anomalies) == 2 and {c.status for c in anomalies} == {
        "misprint_value",
        "misprint_format",
    }


def verify_single_step_cases(half: int = 10) -> list[tuple[str, int, str, bool]]:
    """Window verification of all 8 cases x 5 residues on (2*half+1)^2 windows."""
    w = Window(-half, half, -half, half)
    results = []
    for family, direction in CASE_ORDER:
        for t in range(5):
            lp = LatticePlacement(family, t)
            attack = _attack_near_origin(lp, direction)
            ok = verify_step_in_window(lp, attack, w)
            results.append((family.value, t, direction.name.lower(), ok))
    return results


def _attack_near_origin(lp: LatticePlacement, direction: Direction) -> Cell:
    for r in range(-2, 3):
        for c in range(-2, 3):
            cell = (r, c)
            if lp.contains(cell):
                continue
            g = responsible_guard(lp, cell)
            if (cell[0] - g[0], cell[1] - g[1]) == direction.delta:
                return cell
    raise AssertionError(f"no attack with direction {direction} near origin")


def count_bounds_sweep(max_side: int = 50, enumerate_up_to: int = 30) -> dict:
    """Check floor(mn/5) <= count <= ceil(mn/5) with both extremes attained,
    and closed form == enumeration on the smaller range."""
    checked = 0
    for m in range(1, max_side + 1):
        for n in range(1, max_side + 1):
            lo, hi = m * n // 5, -(-m * n // 5)
            for family in PatternFamily:
                counts = [count_restriction(m, n, t, family) for t in range(5)]
                if not all(lo <= c <= hi for c in counts):
                    raise AssertionError(f"bounds violated at {m}x{n} {family}")
                if lo not in counts or hi not in counts:
                    raise AssertionError(f"extremes not attained at {m}x{n} {family}")
                if m <= enumerate_up_to and n <= enumerate_up_to:
                    w = Window(0, m - 1, 0, n - 1)
                    for t in range(5):
                        got = len(materialize(LatticePlacement(family, t), w).cells)
                        if got != counts[t]:
                            raise AssertionError(f"closed form != enumeration {m}x{n}")
                checked += 1
    return {"pairs_checked": checked, "max_side": max_side}


def general_overhead_report(lo: int = 16, hi: int = 32) -> dict:
    """Measured additive gap of the general construction over the static
    boundary-corrected count, normalized by (m+n)."""
    worst = 0.0
    rows = []
    for m in range(lo, hi + 1):
        for n in range(lo, hi + 1):
            total = len(init_general(m, n).placement)
            static = (m + 2) * (n + 2) // 5 - 4
            gap = total - static
            ratio = gap / (m + n)
            worst = max(worst, ratio)
            rows.append((m, n, total, static, gap))
    return {"max_ratio": worst, "rows": len(rows), "samples": rows[:5]}
