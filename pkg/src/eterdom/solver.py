"""Exact game analysis and the strategy auditor.

The solver computes domination and eternal-domination numbers on paths and
small grids, independently of the strategy engines, and audits those
engines by playing the attacker. Eternal domination is decided by a
greatest fixpoint over guard configurations: start from every dominating
k-set and repeatedly discard configurations that cannot answer some
attack inside the surviving set. What remains are exactly the safe
configurations.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Optional

from .finite import (
    GameState,
    Side,
    Variant,
    init_state,
    interior_window,
    step_state,
)
from .grid import Cell, MovePlan, dominates_region, validate_move_plan
from .pattern import lattice_cells_in_window
from .rng import SplitMix64


class LimitExceeded(RuntimeError):
    pass


class NotFound(RuntimeError):
    pass


@dataclass(frozen=True)
class SmallGraph:
    """A vertex-indexed graph with closed neighborhoods as bitmasks."""

    name: str
    n: int
    closed_masks: tuple[int, ...]
    neighbors: tuple[tuple[int, ...], ...]
    cells: Optional[tuple[Cell, ...]] = None

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1


def path_graph(n: int) -> SmallGraph:
    neighbors = tuple(
        tuple(j for j in (i - 1, i + 1) if 0 <= j < n) for i in range(n)
    )
    masks = tuple((1 << i) | sum(1 << j for j in nb) for i, nb in enumerate(neighbors))
    return SmallGraph(f"path:{n}", n, masks, neighbors)


def grid_graph(m: int, n: int) -> SmallGraph:
    cells = tuple((r, c) for r in range(m) for c in range(n))
    index = {cell: i for i, cell in enumerate(cells)}
    neighbors = []
    for r, c in cells:
        nb = []
        for rr, cc in ((r - 1, c), (r + 1, c), (r, c - 1), (r, c + 1)):
            if 0 <= rr < m and 0 <= cc < n:
                nb.append(index[(rr, cc)])
        neighbors.append(tuple(nb))
    masks = tuple(
        (1 << i) | sum(1 << j for j in nb) for i, nb in enumerate(neighbors)
    )
    return SmallGraph(f"grid:{m}x{n}", m * n, masks, tuple(neighbors), cells)


def parse_graph(spec: str) -> SmallGraph:
    kind, _, rest = spec.partition(":")
    if kind == "path":
        return path_graph(int(rest))
    if kind == "grid":
        m, _, n = rest.partition("x")
        return grid_graph(int(m), int(n))
    raise ValueError(f"unknown graph spec {spec!r} (use path:N or grid:MxN)")


# -- domination number --------------------------------------------------------


def gamma_bruteforce(g: SmallGraph, k_max: Optional[int] = None, cap: int = 5_000_000) -> int:
    """Minimum dominating set size by subset enumeration (small graphs only)."""
    full = g.full_mask
    limit = k_max if k_max is not None else g.n
    for k in range(1, limit + 1):
        if math.comb(g.n, k) > cap:
            raise LimitExceeded(f"C({g.n},{k}) exceeds enumeration cap")
        for combo in combinations(range(g.n), k):
            cover = 0
            for v in combo:
                cover |= g.closed_masks[v]
            if cover == full:
                return k
    raise NotFound(f"no dominating set of size <= {limit}")


def grid_gamma_dp(m: int, n: int) -> int:
    """Domination number of an m-by-n grid by column-profile dynamic
    programming; per-column state is (guard mask, still-uncovered mask)."""
    if m > n:
        m, n = n, m
    if m > 12:
        raise LimitExceeded("profile DP capped at min dimension 12")
    full = (1 << m) - 1

    def spread(h: int) -> int:
        return (h | (h << 1) | (h >> 1)) & full

    best: dict[tuple[int, int], int] = {}
    for h in range(1 << m):
        key = (h, full & ~spread(h))
        cost = h.bit_count()
        if best.get(key, 1 << 30) > cost:
            best[key] = cost
    for _ in range(n - 1):
        nxt: dict[tuple[int, int], int] = {}
        for (g_prev, u), cost in best.items():
            free = full & ~u
            sub = free
            while True:
                h = u | sub
                u2 = full & ~(spread(h) | g_prev)
                key = (h, u2)
                c2 = cost + h.bit_count()
                if nxt.get(key, 1 << 30) > c2:
                    nxt[key] = c2
                if sub == 0:
                    break
                sub = (sub - 1) & free
        best = nxt
    return min(cost for (h, u), cost in best.items() if u == 0)


def gamma(g: SmallGraph, k_max: Optional[int] = None) -> int:
    """Exact domination number; grid/path instances go through the profile DP."""
    if g.cells is not None:
        m = max(r for r, _ in g.cells) + 1
        n = max(c for _, c in g.cells) + 1
        value = grid_gamma_dp(m, n)
    elif g.name.startswith("path:"):
        value = grid_gamma_dp(1, g.n)
    else:
        value = gamma_bruteforce(g, k_max)
    if k_max is not None and value > k_max:
        raise NotFound(f"gamma({g.name}) = {value} exceeds k_max {k_max}")
    return value


# -- eternal domination via greatest fixpoint ---------------------------------


@dataclass(frozen=True)
class SafeSetResult:
    k: int
    safe_count: int
    witness: Optional[tuple[int, ...]]
    iterations: int


def _config_cells(config: int, n: int) -> list[int]:
    return [v for v in range(n) if config >> v & 1]


def _can_respond(g: SmallGraph, before: int, after: int) -> bool:
    """Bijection between the two configurations with every guard moving at
    most one edge, by augmenting-path matching on vertex indices."""
    sources = _config_cells(before, g.n)
    match_of_target: dict[int, int] = {}
    match_of_source: dict[int, int] = {}

    def augment(s: int, visited: set[int]) -> bool:
        for t in (s, *g.neighbors[s]):
            if not (after >> t & 1) or t in visited:
                continue
            visited.add(t)
            owner = match_of_target.get(t)
            if owner is None or augment(owner, visited):
                match_of_target[t] = s
                match_of_source[s] = t
                return True
        return False

    for s in sources:
        if not augment(s, set()):
            return False
    return True


def eternal_safe_set(
    g: SmallGraph,
    k: int,
    cap: int = 10_000_000,
    threads: int = 1,
    elimination: str = "batch",
) -> SafeSetResult:
    """Greatest fixpoint of "can answer every attack within the set".

    ``elimination`` picks the scan discipline ("batch" recomputes against a
    per-round snapshot and is what ``threads`` parallelizes; "eager" deletes
    mid-scan). Both reach the same fixpoint; the auditor asserts that.
    """
    if math.comb(g.n, k) > cap:
        raise LimitExceeded(f"C({g.n},{k}) exceeds configuration cap {cap}")
    full = g.full_mask
    configs: list[int] = []
    for combo in combinations(range(g.n), k):
        mask = 0
        cover = 0
        for v in combo:
            mask |= 1 << v
            cover |= g.closed_masks[v]
        if cover == full:
            configs.append(mask)

    alive: set[int] = set(configs)
    by_vertex: dict[int, list[int]] = {
        v: [c for c in configs if c >> v & 1] for v in range(g.n)
    }
    respond_cache: dict[tuple[int, int], bool] = {}

    def can_respond(before: int, after: int) -> bool:
        key = (before, after)
        got = respond_cache.get(key)
        if got is None:
            got = _can_respond(g, before, after)
            respond_cache[key] = got
        return got

    def is_safe_now(config: int, live: set[int]) -> bool:
        for v in range(g.n):
            if config >> v & 1:
                continue
            if not any(
                c2 in live and can_respond(config, c2) for c2 in by_vertex[v]
            ):
                return False
        return True

    iterations = 0
    while True:
        iterations += 1
        snapshot = set(alive)
        ordered = sorted(alive)
        if elimination == "eager":
            killed = False
            for config in ordered:
                if config in alive and not is_safe_now(config, alive):
                    alive.discard(config)
                    killed = True
            if not killed:
                break
        else:
            def scan(chunk: list[int]) -> list[int]:
                return [c for c in chunk if not is_safe_now(c, snapshot)]

            if threads > 1 and len(ordered) > 1:
                size = (len(ordered) + threads - 1) // threads
                chunks = [ordered[i : i + size] for i in range(0, len(ordered), size)]
                with ThreadPoolExecutor(max_workers=threads) as pool:
                    kills = [c for part in pool.map(scan, chunks) for c in part]
            else:
                kills = scan(ordered)
            if not kills:
                break
            alive -= set(kills)
        if not alive:
            break

    witness = None
    if alive:
        witness = tuple(_config_cells(min(alive), g.n))
    return SafeSetResult(k, len(alive), witness, iterations)


def gamma_infinity(
    g: SmallGraph, k_max: Optional[int] = None, cap: int = 10_000_000, threads: int = 1
) -> int:
    """Smallest guard count whose safe set is nonempty; at least gamma."""
    lo = gamma(g)
    hi = k_max if k_max is not None else g.n
    for k in range(lo, hi + 1):
        if eternal_safe_set(g, k, cap=cap, threads=threads).safe_count > 0:
            return k
    raise NotFound(f"no safe guard count <= {hi} for {g.name}")


# -- attacker policies ---------------------------------------------------------

_BALL2 = tuple(
    (dr, dc)
    for dr in range(-2, 3)
    for dc in range(-2, 3)
    if abs(dr) + abs(dc) <= 2
)


def unguarded_cells(state: GameState) -> list[Cell]:
    cells = state.placement.cells
    return [c for c in state.dims.cells() if c not in cells]


def random_attack(state: GameState, rng: SplitMix64) -> Cell:
    return rng.choice(unguarded_cells(state))


def greedy_attack(state: GameState) -> Cell:
    """Attack the unguarded cell with the fewest guards within distance 2;
    ties break toward the nearest corner, then lexicographically."""
    guards = state.placement.cells
    m, n = state.dims.m, state.dims.n
    corners = ((0, 0), (0, n - 1), (m - 1, 0), (m - 1, n - 1))

    def key(cell: Cell):
        r, c = cell
        near = sum(1 for dr, dc in _BALL2 if (r + dr, c + dc) in guards)
        corner_d = min(abs(r - cr) + abs(c - cc) for cr, cc in corners)
        return (near, corner_d, cell)

    return min(unguarded_cells(state), key=key)


# -- strategy auditor ----------------------------------------------------------


@dataclass
class AuditReport:
    ok: bool
    variant: str
    dims: tuple[int, int]
    mode: str
    rounds_run: int
    violations: list[str] = field(default_factory=list)
    counterexample: Optional[dict] = None
    stats: dict = field(default_factory=dict)


def check_invariants(before: GameState, after: GameState, attack: Cell, plan: MovePlan) -> dict[str, bool]:
    """Full per-round invariant battery; every flag must be true."""
    dims = after.dims
    flags: dict[str, bool] = {}
    flags["plan_valid"] = bool(
        validate_move_plan(before.placement, plan, attack, after.placement)
    )
    flags["dominating"] = dominates_region(after.placement.cells, dims.window())
    flags["count_constant"] = len(before.placement) == len(after.placement)
    flags["pattern_contained"] = all(
        c in after.placement.cells
        for c in lattice_cells_in_window(after.interior_pattern, interior_window(dims))
    )
    flags["family_alternates"] = (
        after.interior_pattern.family is not before.interior_pattern.family
    )
    if after.variant is Variant.FULL_BOUNDARY:
        flags["boundary_saturated"] = dims.boundary() <= after.placement.cells
    if after.variant in (Variant.IMPROVED, Variant.GENERAL):
        active = dims
        cells = after.placement.cells
        if after.variant is Variant.GENERAL:
            from .finite import general_subgrid

            active = general_subgrid(dims.m, dims.n)
            strip = {
                c
                for c in dims.cells()
                if c[0] >= active.m or c[1] >= active.n
            }
            flags["strips_saturated"] = strip <= cells
            cells = cells - strip
        flags["corners_fixed"] = all(
            (c, c) in plan.pairs for c in active.corners()
        )
        seg_ok = True
        for side in Side:
            segs = set()
            npos = len(side.positions(active))
            for s0 in range(0, npos, 5):
                seg = frozenset(
                    p - s0
                    for p in range(s0 + 1, s0 + 6)
                    if side.cell_at(active, p) in cells
                )
                segs.add(seg)
            if len(segs) != 1 or len(next(iter(segs))) != 3:
                seg_ok = False
        flags["sides_uniform_3_per_segment"] = seg_ok
    return flags


StepFn = Callable[[GameState, Cell], tuple[GameState, MovePlan]]


def run_audit(
    initial: GameState,
    step: StepFn,
    mode: str,
    rounds: int,
    seed: int = 0,
    on_round: Optional[Callable[[int, Cell, GameState, MovePlan, dict], None]] = None,
) -> AuditReport:
    """Play the attacker against a step function, asserting invariants each
    round; returns a counterexample trace on the first violation."""
    state = initial
    rng = SplitMix64(seed)
    attacks: list[Cell] = []
    report = AuditReport(
        ok=True,
        variant=state.variant.value,
        dims=(state.dims.m, state.dims.n),
        mode=mode,
        rounds_run=0,
    )
    t0 = time.monotonic()
    for rnd in range(rounds):
        attack = greedy_attack(state) if mode == "greedy" else random_attack(state, rng)
        attacks.append(attack)
        before = state
        state, plan = step(state, attack)
        flags = check_invariants(before, state, attack, plan)
        report.rounds_run = rnd + 1
        if on_round is not None:
            on_round(rnd, attack, state, plan, flags)
        bad = sorted(name for name, ok in flags.items() if not ok)
        if bad:
            report.ok = False
            report.violations = bad
            report.counterexample = {
                "attacks": [list(a) for a in attacks],
                "round": rnd,
                "failed": bad,
                "placement": sorted(state.placement.cells),
            }
            break
    report.stats["wall_time_s"] = round(time.monotonic() - t0, 3)
    return report


def exhaustive_audit(variant: Variant, m: int, n: int) -> AuditReport:
    """BFS closure over (state, attack): proves the strategy's reachable
    state machine answers every attack. Improved/general states collapse to
    their catalogue slot, so the space is finite and small."""
    if variant is Variant.FULL_BOUNDARY:
        raise ValueError("exhaustive audit requires the catalogue-backed variants")
    initial = init_state(variant, m, n)
    t0 = time.monotonic()

    def state_key(s: GameState) -> tuple:
        return (s.interior_pattern.family.value, s.interior_pattern.t)

    seen: dict[tuple, GameState] = {state_key(initial): initial}
    frontier = [initial]
    edges = 0
    report = AuditReport(
        ok=True, variant=variant.value, dims=(m, n), mode="exhaustive", rounds_run=0
    )
    while frontier:
        state = frontier.pop()
        for attack in unguarded_cells(state):
            nxt, plan = step_state(state, attack)
            flags = check_invariants(state, nxt, attack, plan)
            edges += 1
            bad = sorted(name for name, ok in flags.items() if not ok)
            if bad:
                report.ok = False
                report.violations = bad
                report.counterexample = {
                    "state": state_key(state),
                    "attack": list(attack),
                    "failed": bad,
                }
                report.stats["wall_time_s"] = round(time.monotonic() - t0, 3)
                return report
            key = state_key(nxt)
            if key not in seen:
                seen[key] = nxt
                frontier.append(nxt)
    report.rounds_run = edges
    report.stats.update(
        {
            "reachable_states": len(seen),
            "edges": edges,
            "wall_time_s": round(time.monotonic() - t0, 3),
        }
    )
    return report


def audit_strategy(
    variant: Variant, m: int, n: int, mode: str, rounds: int = 0, seed: int = 0
) -> AuditReport:
    if mode == "exhaustive":
        return exhaustive_audit(variant, m, n)
    if mode not in ("random", "greedy"):
        raise ValueError(f"unknown attacker mode {mode!r}")
    return run_audit(init_state(variant, m, n), step_state, mode, rounds, seed)
