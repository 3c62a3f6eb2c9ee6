"""Eternal-domination engine, verifier, and exact solver for rectangular grids."""

from .grid import (
    Cell,
    GridDims,
    GuardPlacement,
    MovePlan,
    MoveRejection,
    PlanVerdict,
    Window,
    closed_neighborhood,
    is_dominating,
    is_perfect_on,
    move_plan,
    placement,
    render_placement,
    transition_exists,
    validate_move_plan,
)
from .pattern import (
    LatticePlacement,
    PatternFamily,
    chang_dominating_set,
    count_restriction,
    f_value,
    materialize,
    pick_max_residue,
)
from .infinite import (
    AttackOnGuard,
    Direction,
    EmptySquare,
    SymbolicStep,
    empty_squares,
    expand_step,
    responsible_guard,
    rotate_square_step,
    shift_step,
    verify_step_in_window,
)
from .finite import (
    BadDimensions,
    GameState,
    Variant,
    full_boundary_guard_count,
    improved_guard_count,
    init_full_boundary,
    init_general,
    init_improved,
    init_state,
    step_full_boundary,
    step_general,
    step_improved,
    step_state,
)
from .solver import (
    SafeSetResult,
    SmallGraph,
    audit_strategy,
    eternal_safe_set,
    gamma,
    gamma_infinity,
    grid_graph,
    path_graph,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
