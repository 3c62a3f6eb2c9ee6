"""The closed 7x7 placement family driving the partial-boundary strategy.

Each of the ten placements pairs a lattice restriction on the 5x5 interior
with four immovable corner guards and a side cover of 3 guards per 5
boundary cells. Interiors are fixed by the lattice; the side covers are
*solved for*: a backtracking search picks, per side and placement, which 3
of the 5 positions hold guards so that every attack on every placement has
a legal answer that lands back inside the family. Side covers must also
dominate their side periodically (segment neighbors wrap mod 5) so the 7x7
family tiles onto larger grids.

The derived family is serialized into a versioned data file committed with
the package; simulation only replays it.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources
from itertools import combinations
from typing import Optional

from .finite import (
    LatticeGridStep,
    Side,
    _LOCAL_DIMS,
    _LOCAL_INTERIOR,
    lattice_grid_step,
)
from .grid import (
    Cell,
    MovePlan,
    is_dominating,
    move_plan,
    placement,
    validate_move_plan,
)
from .pattern import LatticePlacement, PatternFamily, lattice_cells_in_window

CATALOGUE_VERSION = 1

SLOT_ORDER: tuple[str, ...] = tuple(
    f"{tag}{t}" for tag in ("S", "T") for t in range(5)
)

_FAMILY_OF_TAG = {"S": PatternFamily.STRAIGHT, "T": PatternFamily.TRANSPOSED}
_TAG_OF_FAMILY = {v: k for k, v in _FAMILY_OF_TAG.items()}


def slot_id_of(lp: LatticePlacement) -> str:
    return f"{_TAG_OF_FAMILY[lp.family]}{lp.t}"


def pattern_of_slot(sid: str) -> LatticePlacement:
    return LatticePlacement(_FAMILY_OF_TAG[sid[0]], int(sid[1:]))


class NoClosure(RuntimeError):
    """No side-cover assignment closes the transition system."""

    def __init__(self, message: str, partial: Optional[dict] = None):
        super().__init__(message)
        self.partial = partial or {}


@dataclass(frozen=True)
class Catalogue:
    version: int
    placements: dict[str, frozenset[Cell]]
    transitions: dict[tuple[str, Cell], tuple[str, MovePlan]]

    def slot_id(self, lp: LatticePlacement) -> str:
        return slot_id_of(lp)

    def slot_pattern(self, sid: str) -> LatticePlacement:
        return pattern_of_slot(sid)


def _interior_cells(lp: LatticePlacement) -> frozenset[Cell]:
    return frozenset(lattice_cells_in_window(lp, _LOCAL_INTERIOR))


def _lattice_side_pos(lp: LatticePlacement, side: Side) -> int:
    found = [
        p
        for p in side.positions(_LOCAL_DIMS)
        if lp.contains(side.cell_at(_LOCAL_DIMS, p))
    ]
    assert len(found) == 1, (lp, side, found)
    return found[0]


def _periodic_side_dominated(side: Side, cover: frozenset[int], interior: frozenset[Cell]) -> bool:
    """Side cells must be dominated with segment neighbors wrapping mod 5,
    so that the cover still dominates when tiled along a longer side."""
    support_row = {Side.TOP: 1, Side.BOTTOM: 5}
    for p in range(1, 6):
        if p in cover:
            continue
        left = 5 if p == 1 else p - 1
        right = 1 if p == 5 else p + 1
        if left in cover or right in cover:
            continue
        if side in (Side.TOP, Side.BOTTOM):
            inner = (support_row[side], p)
        else:
            inner = (p, 1) if side is Side.LEFT else (p, 5)
        if inner in interior:
            continue
        return False
    return True


@dataclass(frozen=True)
class _SideGeometry:
    exit_pos: Optional[int]
    missing_pos: Optional[int]


def _side_geometry(lgs: LatticeGridStep, side: Side) -> _SideGeometry:
    exits = lgs.exits.get(side, ())
    missing = lgs.missing.get(side, ())
    assert len(exits) <= 1 and len(missing) <= 1, (side, exits, missing)
    assert len(exits) == len(missing), f"unbalanced crossings on {side}"
    epos = side.pos_of(exits[0][1]) if exits else None
    mpos = side.pos_of(missing[0][0]) if missing else None
    return _SideGeometry(epos, mpos)


def _side_match_ok(
    cover_a: frozenset[int],
    cover_b: frozenset[int],
    geo: _SideGeometry,
    lat_a: int,
    lat_b: int,
) -> bool:
    froms = sorted(cover_a)
    tos = sorted(cover_b)
    if geo.missing_pos is not None:
        assert geo.missing_pos == lat_a
        froms.remove(lat_a)
    if geo.exit_pos is not None:
        assert geo.exit_pos == lat_b
        tos.remove(lat_b)
    return all(abs(f - t) <= 1 for f, t in zip(froms, tos))


def derive_catalogue() -> Catalogue:
    dims = _LOCAL_DIMS
    slots: dict[str, LatticePlacement] = {sid: pattern_of_slot(sid) for sid in SLOT_ORDER}
    interiors = {sid: _interior_cells(lp) for sid, lp in slots.items()}
    lattice_pos = {
        sid: {side: _lattice_side_pos(lp, side) for side in Side}
        for sid, lp in slots.items()
    }
    corners = sorted(dims.corners())

    # Geometry of every potentially attackable cell (anything off the
    # lattice and off the corners); actual attackability further excludes
    # the chosen cover cells, which the solver accounts for per candidate.
    geometries: dict[tuple[str, Cell], tuple[str, LatticeGridStep]] = {}
    for sid, lp in slots.items():
        for cell in dims.cells():
            if lp.contains(cell) or cell in dims.corners():
                continue
            lgs = lattice_grid_step(dims, lp, cell)
            geometries[(sid, cell)] = (slot_id_of(lgs.after), lgs)

    covers = {
        side: _solve_side(side, slots, interiors, lattice_pos, geometries)
        for side in Side
    }

    placements: dict[str, frozenset[Cell]] = {}
    for sid in SLOT_ORDER:
        cells = set(interiors[sid]) | set(corners)
        for side in Side:
            for p in covers[side][sid]:
                cells.add(side.cell_at(dims, p))
        placements[sid] = frozenset(cells)
        assert len(placements[sid]) == 21, (sid, len(placements[sid]))

    transitions: dict[tuple[str, Cell], tuple[str, MovePlan]] = {}
    for sid in SLOT_ORDER:
        for attack in dims.cells():
            if attack in placements[sid]:
                continue
            to_sid, lgs = geometries[(sid, attack)]
            pairs: list[tuple[Cell, Cell]] = list(lgs.interior_pairs)
            for side in Side:
                pairs.extend(lgs.exits.get(side, ()))
                pairs.extend(
                    _side_cover_pairs(
                        dims, side, covers[side][sid], covers[side][to_sid], lgs
                    )
                )
            pairs.extend((c, c) for c in corners)
            plan = move_plan(pairs)
            before = placement(placements[sid], dims)
            after = placement(placements[to_sid], dims)
            verdict = validate_move_plan(before, plan, attack, after)
            if not verdict.ok:
                raise NoClosure(
                    f"derived plan invalid for {sid} attack {attack}: {verdict.reason}",
                    {"covers": covers},
                )
            transitions[(sid, attack)] = (to_sid, plan)

    cat = Catalogue(CATALOGUE_VERSION, placements, transitions)
    _verify_catalogue(cat)
    return cat


def _side_cover_pairs(
    dims,
    side: Side,
    cover_a: frozenset[int],
    cover_b: frozenset[int],
    lgs: LatticeGridStep,
) -> list[tuple[Cell, Cell]]:
    geo = _side_geometry(lgs, side)
    froms = sorted(cover_a)
    tos = sorted(cover_b)
    pairs: list[tuple[Cell, Cell]] = []
    if geo.missing_pos is not None:
        (src, tgt), = lgs.missing[side]
        pairs.append((src, tgt))
        froms.remove(geo.missing_pos)
    if geo.exit_pos is not None:
        tos.remove(geo.exit_pos)
    for f, t in zip(froms, tos):
        assert abs(f - t) <= 1, (side, froms, tos)
        pairs.append((side.cell_at(dims, f), side.cell_at(dims, t)))
    return pairs


def _solve_side(
    side: Side,
    slots: dict[str, LatticePlacement],
    interiors: dict[str, frozenset[Cell]],
    lattice_pos: dict[str, dict[Side, int]],
    geometries: dict[tuple[str, Cell], tuple[str, LatticeGridStep]],
) -> dict[str, frozenset[int]]:
    domains: dict[str, list[frozenset[int]]] = {}
    for sid in SLOT_ORDER:
        lat = lattice_pos[sid][side]
        cands = []
        for extra in combinations([p for p in range(1, 6) if p != lat], 2):
            cover = frozenset({lat, *extra})
            if _periodic_side_dominated(side, cover, interiors[sid]):
                cands.append(cover)
        if not cands:
            raise NoClosure(f"no dominating side cover for {sid} on {side}")
        domains[sid] = cands

    # constraints grouped by (from-slot, to-slot): list of (attack, geometry)
    cons: dict[tuple[str, str], list[tuple[Cell, _SideGeometry]]] = {}
    for (sid, attack), (to_sid, lgs) in geometries.items():
        cons.setdefault((sid, to_sid), []).append((attack, _side_geometry(lgs, side)))

    assignment: dict[str, frozenset[int]] = {}
    on_side = {
        cell: side.pos_of(cell)
        for p in side.positions(_LOCAL_DIMS)
        for cell in [side.cell_at(_LOCAL_DIMS, p)]
    }

    def pair_ok(a: str, b: str) -> bool:
        for attack, geo in cons.get((a, b), ()):
            pos = on_side.get(attack)
            if pos is not None and pos in assignment[a]:
                continue  # that cell is covered; not attackable
            if not _side_match_ok(
                assignment[a], assignment[b], geo, lattice_pos[a][side], lattice_pos[b][side]
            ):
                return False
        return True

    order = list(SLOT_ORDER)

    def backtrack(i: int) -> bool:
        if i == len(order):
            return True
        sid = order[i]
        for cand in domains[sid]:
            assignment[sid] = cand
            ok = all(
                pair_ok(sid, other) and pair_ok(other, sid)
                for other in assignment
                if other != sid
            )
            if ok and backtrack(i + 1):
                return True
            del assignment[sid]
        return False

    if not backtrack(0):
        raise NoClosure(f"side {side.value}: no cover assignment closes", {"domains": domains})
    return dict(assignment)


def _verify_catalogue(cat: Catalogue) -> None:
    dims = _LOCAL_DIMS
    corners = dims.corners()
    relation: set[tuple[str, str]] = set()
    for sid, cells in cat.placements.items():
        assert len(cells) == 21
        assert corners <= cells
        assert is_dominating(placement(cells, dims))
        lp = pattern_of_slot(sid)
        assert _interior_cells(lp) <= cells
        for side in Side:
            count = sum(1 for p in side.positions(dims) if side.cell_at(dims, p) in cells)
            assert count == 3, (sid, side, count)
        attacks = [c for c in dims.cells() if c not in cells]
        assert len(attacks) == 28
        for attack in attacks:
            assert (sid, attack) in cat.transitions, (sid, attack)
            to_sid, plan = cat.transitions[(sid, attack)]
            relation.add((sid, to_sid))
            for corner in corners:
                assert (corner, corner) in plan.pairs
    for a, b in relation:
        assert (b, a) in relation, f"transition relation not symmetric: {a}->{b} only"


# -- serialization ------------------------------------------------------------


def to_json(cat: Catalogue) -> str:
    doc = {
        "version": cat.version,
        "grid": 7,
        "placements": {
            sid: [list(c) for c in sorted(cat.placements[sid])] for sid in SLOT_ORDER
        },
        "transitions": [
            {
                "from": sid,
                "attack": list(attack),
                "to": to_sid,
                "plan": [[list(a), list(b)] for a, b in sorted(plan.pairs)],
            }
            for (sid, attack), (to_sid, plan) in sorted(
                cat.transitions.items(), key=lambda kv: (kv[0][0], kv[0][1])
            )
        ],
    }
    return json.dumps(doc, indent=None, separators=(",", ":"), sort_keys=True) + "\n"


def from_json(text: str) -> Catalogue:
    doc = json.loads(text)
    if doc.get("version") != CATALOGUE_VERSION:
        raise ValueError(f"unsupported catalogue version {doc.get('version')}")
    placements = {
        sid: frozenset((r, c) for r, c in cells)
        for sid, cells in doc["placements"].items()
    }
    transitions: dict[tuple[str, Cell], tuple[str, MovePlan]] = {}
    for tr in doc["transitions"]:
        attack = (tr["attack"][0], tr["attack"][1])
        plan = move_plan(((a[0], a[1]), (b[0], b[1])) for a, b in tr["plan"])
        transitions[(tr["from"], attack)] = (tr["to"], plan)
    return Catalogue(doc["version"], placements, transitions)


def default_path():
    return resources.files("eterdom").joinpath("data/catalogue_7x7.json")


@lru_cache(maxsize=1)
def load_default() -> Catalogue:
    return from_json(default_path().read_text())


def save_default(cat: Catalogue) -> None:
    import pathlib

    path = pathlib.Path(str(default_path()))
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(to_json(cat))
