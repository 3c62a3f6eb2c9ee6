"""Command-line harness wiring patterns, strategies, and the solver into
reproducible experiments.

Exit codes: 0 all assertions passed, 1 usage error, 2 invariant violation
(a counterexample is written to the trace / stderr). Trace files are JSONL
(see docs/trace-format.md); if EG_TRACE_DIR is set, relative trace paths
are created under it.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path
from typing import Optional

from . import catalogue as cat_mod
from .finite import (
    GameState,
    Variant,
    init_state,
)
from .grid import Window, render_placement
from .infinite import rotate_square_step, verify_step_in_window
from .pattern import (
    LatticePlacement,
    PatternFamily,
    chang_dominating_set,
    count_restriction,
    materialize,
    pick_max_residue,
)
from .rng import SplitMix64
from .solver import (
    audit_strategy,
    eternal_safe_set,
    gamma,
    gamma_infinity,
    parse_graph,
    run_audit,
)
from .trace import TraceRecord, header_line
from .verify import (
    count_bounds_sweep,
    tables_reconciled,
    verify_single_step_cases,
    verify_tables,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"error: {message}\n")
        raise SystemExit(EXIT_USAGE)


def _trace_path(raw: str) -> Path:
    base = os.environ.get("EG_TRACE_DIR")
    path = Path(raw)
    if base and not path.is_absolute():
        path = Path(base) / path
    path.parent.mkdir(parents=True, exist_ok=True)
    return path


def _family(name: str) -> PatternFamily:
    return PatternFamily(name)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="eterdom", description=__doc__)
    sub = p.add_subparsers(dest="cmd", required=True)

    sim = sub.add_parser("simulate", help="run a finite-grid game with an attacker policy")
    sim.add_argument("--m", type=int, required=True)
    sim.add_argument("--n", type=int, required=True)
    sim.add_argument("--variant", choices=[v.value for v in Variant], default="improved")
    sim.add_argument("--attacker", choices=["random", "greedy", "exhaustive"], default="random")
    sim.add_argument("--rounds", type=int, default=1000)
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--trace", type=str, default=None, help="write a JSONL trace here")

    inf = sub.add_parser("infinite", help="symbolic unbounded-grid strategy")
    infsub = inf.add_subparsers(dest="subcmd", required=True)
    infsim = infsub.add_parser("simulate", help="random attacks with per-step window checks")
    infsim.add_argument("--steps", type=int, default=1000)
    infsim.add_argument("--seed", type=int, default=0)
    infsim.add_argument("--window", type=int, default=4, help="verification margin around the attack")
    infsim.add_argument("--trace", type=str, default=None)

    pat = sub.add_parser("pattern", help="lattice family inspection")
    patsub = pat.add_subparsers(dest="subcmd", required=True)
    patc = patsub.add_parser("count", help="window counts per residue")
    patc.add_argument("--m", type=int, required=True)
    patc.add_argument("--n", type=int, required=True)
    patc.add_argument("--family", choices=["straight", "transposed"], default="straight")
    patr = patsub.add_parser("render", help="render a materialized window")
    patr.add_argument("--t", type=int, required=True)
    patr.add_argument("--family", choices=["straight", "transposed"], default="straight")
    patr.add_argument("--m", type=int, required=True)
    patr.add_argument("--n", type=int, required=True)

    sol = sub.add_parser("solve", help="exact domination / eternal domination")
    sol.add_argument("what", choices=["gamma", "gamma-inf"])
    sol.add_argument("--graph", required=True, help="path:N or grid:MxN")
    sol.add_argument("--kmax", type=int, default=None)
    sol.add_argument("--threads", type=int, default=1)

    ver = sub.add_parser("verify", help="computational cross-checks")
    ver.add_argument("what", choices=["tables", "lemma1"])
    ver.add_argument("--window", type=int, default=10)

    cnt = sub.add_parser("count", help="counting-bound sweeps")
    cnt.add_argument("what", choices=["lemma"])
    cnt.add_argument("--max", type=int, default=50)

    cat = sub.add_parser("catalogue", help="the 7x7 closed placement family")
    catsub = cat.add_subparsers(dest="subcmd", required=True)
    catd = catsub.add_parser("derive", help="re-derive and optionally write/check")
    catd.add_argument("--out", type=str, default=None)
    catd.add_argument("--check", action="store_true", help="compare against the packaged file")
    cats = catsub.add_parser("show", help="summarize the packaged catalogue")
    cats.add_argument("--slot", type=str, default=None)

    cha = sub.add_parser("chang", help="static boundary-corrected dominating set")
    cha.add_argument("--m", type=int, required=True)
    cha.add_argument("--n", type=int, required=True)
    cha.add_argument("--render", action="store_true")

    srv = sub.add_parser("serve", help="session service plus web UI bridge")
    srv.add_argument("--port", type=int, default=8080, help="HTTP port for the UI")
    srv.add_argument("--service-port", type=int, default=7575, help="TCP protocol port")
    srv.add_argument("--static", type=str, default=None, help="static asset directory")
    srv.add_argument("--no-http", action="store_true", help="TCP protocol service only")

    return p


# -- command bodies ------------------------------------------------------------


def _cmd_simulate(args) -> int:
    if args.attacker == "exhaustive":
        report = audit_strategy(Variant(args.variant), args.m, args.n, "exhaustive")
        print(
            f"exhaustive closure: ok={report.ok} states={report.stats.get('reachable_states')} "
            f"edges={report.stats.get('edges')} time={report.stats.get('wall_time_s')}s"
        )
        if not report.ok:
            print(json.dumps(report.counterexample), file=sys.stderr)
            return EXIT_VIOLATION
        return EXIT_OK

    lines: list[str] = [
        header_line(
            "simulate",
            {
                "m": args.m,
                "n": args.n,
                "variant": args.variant,
                "attacker": args.attacker,
                "rounds": args.rounds,
            },
            args.seed,
        )
    ]

    def on_round(rnd, attack, state: GameState, plan, flags):
        rec = TraceRecord(
            round=rnd,
            attack=attack,
            plan=plan,
            cells_after=tuple(state.placement.cells),
            pattern_after=state.interior_pattern,
            invariant_flags=flags,
        )
        lines.append(rec.to_json())

    from .finite import step_state

    report = run_audit(
        init_state(Variant(args.variant), args.m, args.n),
        step_state,
        args.attacker,
        args.rounds,
        args.seed,
        on_round=on_round,
    )
    if args.trace:
        from .trace import revalidate_trace

        path = _trace_path(args.trace)
        path.write_text("\n".join(lines) + "\n")
        count = revalidate_trace(path.read_text().splitlines())
        print(f"trace: {path} ({count} records, digests re-verified)")
    print(
        f"simulate {args.m}x{args.n} {args.variant} {args.attacker}: "
        f"rounds={report.rounds_run} ok={report.ok} time={report.stats['wall_time_s']}s"
    )
    if not report.ok:
        print(json.dumps(report.counterexample), file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_infinite_simulate(args) -> int:
    margin = max(4, args.window)
    rng = SplitMix64(args.seed)
    lp = LatticePlacement(PatternFamily.STRAIGHT, 0)
    lines = [
        header_line(
            "infinite simulate",
            {"steps": args.steps, "window": margin},
            args.seed,
        )
    ]
    box = 8
    for step_no in range(args.steps):
        while True:
            cell = (rng.below(2 * box + 1) - box, rng.below(2 * box + 1) - box)
            if not lp.contains(cell):
                break
        w = Window(cell[0] - margin, cell[0] + margin, cell[1] - margin, cell[1] + margin)
        ok = verify_step_in_window(lp, cell, w)
        step = rotate_square_step(lp, cell)
        lines.append(
            json.dumps(
                {
                    "round": step_no,
                    "attack": list(cell),
                    "before": {"family": lp.family.value, "t": lp.t},
                    "after": {"family": step.after.family.value, "t": step.after.t},
                    "verified": ok,
                },
                separators=(",", ":"),
                sort_keys=True,
            )
        )
        if not ok:
            print(f"step {step_no}: window verification failed at {cell}", file=sys.stderr)
            return EXIT_VIOLATION
        lp = step.after
    if args.trace:
        path = _trace_path(args.trace)
        path.write_text("\n".join(lines) + "\n")
        print(f"trace: {path}")
    print(f"infinite simulate: {args.steps} steps verified")
    return EXIT_OK


def _cmd_pattern(args) -> int:
    fam = _family(args.family)
    if args.subcmd == "count":
        counts = {t: count_restriction(args.m, args.n, t, fam) for t in range(5)}
        for t, c in counts.items():
            print(f"t={t}: {c}")
        print(f"max at t={pick_max_residue(args.m, args.n, fam)}")
        return EXIT_OK
    lp = LatticePlacement(fam, args.t)
    w = Window(0, args.m - 1, 0, args.n - 1)
    print(render_placement(materialize(lp, w)))
    return EXIT_OK


def _cmd_solve(args) -> int:
    g = parse_graph(args.graph)
    t0 = time.monotonic()
    if args.what == "gamma":
        value = gamma(g, args.kmax)
        print(f"graph: {g.name}")
        print(f"gamma: {value}")
    else:
        value = gamma_infinity(g, args.kmax, threads=args.threads)
        result = eternal_safe_set(g, value, threads=args.threads)
        print(f"graph: {g.name}")
        print(f"gamma-inf: {value}")
        print(f"safe-configurations: {result.safe_count}")
        print(f"fixpoint-rounds: {result.iterations}")
        if result.witness is not None and g.cells is not None:
            cells = frozenset(g.cells[v] for v in result.witness)
            m = max(r for r, _ in g.cells) + 1
            n = max(c for _, c in g.cells) + 1
            from .grid import render_cells

            print("witness:")
            print(render_cells(cells, Window(0, m - 1, 0, n - 1)))
        elif result.witness is not None:
            print(f"witness: {list(result.witness)}")
    print(f"wall-time: {time.monotonic() - t0:.3f}s")
    return EXIT_OK


def _cmd_verify(args) -> int:
    if args.what == "tables":
        checks = verify_tables()
        anomalies = [c for c in checks if c.status != "ok"]
        for c in checks:
            mark = "OK " if c.status == "ok" else "FIX"
            print(
                f"{mark} case{c.case_no} {c.family}/{c.direction} "
                f"{c.from_offset}->{c.to_offset} printed '{c.printed}' "
                f"computed {c.computed} [{c.status}]"
            )
        if tables_reconciled(checks):
            print(f"reconciled: {len(anomalies)} known misprints, all residues recomputed")
            return EXIT_OK
        print("unexpected table disagreement", file=sys.stderr)
        return EXIT_VIOLATION
    results = verify_single_step_cases(args.window)
    bad = [r for r in results if not r[3]]
    for fam, t, d, ok in results:
        print(f"{'OK ' if ok else 'BAD'} {fam} t={t} attack={d}")
    print(f"{len(results) - len(bad)}/{len(results)} cases verified")
    return EXIT_OK if not bad else EXIT_VIOLATION


def _cmd_count(args) -> int:
    summary = count_bounds_sweep(args.max)
    print(
        f"counting bounds hold for all dims <= {summary['max_side']} "
        f"({summary['pairs_checked']} family/dims pairs)"
    )
    return EXIT_OK


def _cmd_catalogue(args) -> int:
    if args.subcmd == "derive":
        t0 = time.monotonic()
        cat = cat_mod.derive_catalogue()
        text = cat_mod.to_json(cat)
        print(
            f"derived {len(cat.placements)} placements, {len(cat.transitions)} transitions "
            f"in {time.monotonic() - t0:.2f}s"
        )
        if args.out:
            Path(args.out).write_text(text)
            print(f"written: {args.out}")
        if args.check:
            packaged = cat_mod.default_path().read_text()
            if packaged != text:
                print("derived catalogue differs from the packaged file", file=sys.stderr)
                return EXIT_VIOLATION
            print("matches the packaged file byte-for-byte")
        return EXIT_OK
    cat = cat_mod.load_default()
    if args.slot:
        cells = cat.placements[args.slot]
        from .grid import GridDims, render_cells

        print(render_cells(cells, GridDims(7, 7).window()))
        return EXIT_OK
    rel = sorted({(a, b) for (a, _), (b, _) in cat.transitions.items()})
    print(f"version: {cat.version}")
    print(f"placements: {len(cat.placements)} (21 guards each)")
    print(f"transitions: {len(cat.transitions)}")
    print(f"relation edges: {len(rel)} (symmetric)")
    return EXIT_OK


def _cmd_chang(args) -> int:
    p = chang_dominating_set(args.m, args.n)
    formula = (args.m + 2) * (args.n + 2) // 5 - 4
    print(f"size: {len(p.cells)} (formula {formula})")
    from .grid import is_dominating

    print(f"dominating: {is_dominating(p)}")
    if args.render:
        print(render_placement(p))
    return EXIT_OK if len(p.cells) == formula and is_dominating(p) else EXIT_VIOLATION


def _cmd_serve(args) -> int:
    from .service import SessionServer, serve_forever
    import threading

    if args.no_http:
        print(f"session service on tcp://127.0.0.1:{args.service_port}")
        serve_forever(port=args.service_port)
        return EXIT_OK
    try:
        from .webserve import run_http_bridge
    except ImportError as exc:
        print(
            f"HTTP bridge needs the [serve] extra (fastapi, uvicorn): {exc}",
            file=sys.stderr,
        )
        return EXIT_USAGE
    tcp = SessionServer(port=args.service_port)
    threading.Thread(target=tcp.serve_forever, daemon=True).start()
    print(f"session service on tcp://127.0.0.1:{args.service_port}")
    static = args.static or str(Path(__file__).resolve().parents[2] / "frontend" / "dist")
    print(f"web UI on http://127.0.0.1:{args.port} (static: {static})")
    run_http_bridge(args.port, static, tcp.protocol)
    return EXIT_OK


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.cmd == "simulate":
            return _cmd_simulate(args)
        if args.cmd == "infinite":
            return _cmd_infinite_simulate(args)
        if args.cmd == "pattern":
            return _cmd_pattern(args)
        if args.cmd == "solve":
            return _cmd_solve(args)
        if args.cmd == "verify":
            return _cmd_verify(args)
        if args.cmd == "count":
            return _cmd_count(args)
        if args.cmd == "catalogue":
            return _cmd_catalogue(args)
        if args.cmd == "chang":
            return _cmd_chang(args)
        if args.cmd == "serve":
            return _cmd_serve(args)
    except (ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
