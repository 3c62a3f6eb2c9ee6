from eterdom.catalogue import (
    SLOT_ORDER,
    default_path,
    derive_catalogue,
    from_json,
    load_default,
    pattern_of_slot,
    slot_id_of,
    to_json,
)
from eterdom.finite import _LOCAL_DIMS, _LOCAL_INTERIOR, Side
from eterdom.grid import is_dominating, placement, validate_move_plan
from eterdom.pattern import lattice_cells_in_window


def test_slot_ids_roundtrip():
    for sid in SLOT_ORDER:
        assert slot_id_of(pattern_of_slot(sid)) == sid


def test_catalogue_placements_shape():
    cat = load_default()
    assert set(cat.placements) == set(SLOT_ORDER)
    dims = _LOCAL_DIMS
    for sid, cells in cat.placements.items():
        assert len(cells) == 21
        assert dims.corners() <= cells
        assert is_dominating(placement(cells, dims))
        interior = frozenset(lattice_cells_in_window(pattern_of_slot(sid), _LOCAL_INTERIOR))
        assert interior <= cells
        for side in Side:
            count = sum(
                1 for p in side.positions(dims) if side.cell_at(dims, p) in cells
            )
            assert count == 3


def test_catalogue_closure_and_plans():
    cat = load_default()
    dims = _LOCAL_DIMS
    for sid, cells in cat.placements.items():
        attacks = [c for c in dims.cells() if c not in cells]
        assert len(attacks) == 28
        for attack in attacks:
            to_sid, plan = cat.transitions[(sid, attack)]
            before = placement(cells, dims)
            after = placement(cat.placements[to_sid], dims)
            assert validate_move_plan(before, plan, attack, after).ok
            assert all((c, c) in plan.pairs for c in dims.corners())


def test_catalogue_relation_symmetric_and_family_flipping():
    cat = load_default()
    relation = {(a, b) for (a, _), (b, _) in cat.transitions.items()}
    for a, b in relation:
        assert (b, a) in relation
        assert a[0] != b[0], "every transition flips the family"


def test_catalogue_rederivation_matches_golden_file():
    derived = derive_catalogue()
    assert to_json(derived) == default_path().read_text()


def test_catalogue_json_roundtrip():
    cat = load_default()
    again = from_json(to_json(cat))
    assert again.placements == cat.placements
    assert again.transitions.keys() == cat.transitions.keys()
    assert to_json(again) == to_json(cat)
