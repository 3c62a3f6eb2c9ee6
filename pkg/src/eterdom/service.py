"""Session service: play the attacker against the engine over a socket.

Transport is a persistent TCP connection (default port 7575) carrying one
JSON message per line in each direction. The protocol is documented with
examples in docs/protocol.md; the browser client speaks the same messages
through the `serve` command's websocket bridge. Sessions are addressed by
an opaque id, so a client may resume after reconnecting. Messages for one
session are processed strictly in arrival order; distinct sessions run
concurrently.
"""

from __future__ import annotations

import json
import socketserver
import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Optional

from .finite import (
    AttackOutOfBounds,
    BadDimensions,
    GameState,
    Variant,
    init_state,
    step_state,
)
from .grid import MovePlan
from .infinite import AttackOnGuard
from .solver import check_invariants, greedy_attack
from .trace import placement_digest

DEFAULT_PORT = 7575


def state_snapshot(state: GameState) -> dict:
    cells, digest = placement_digest(state.placement.cells)
    return {
        "m": state.dims.m,
        "n": state.dims.n,
        "variant": state.variant.value,
        "round": state.round,
        "cells": cells,
        "hash": digest,
        "pattern": {
            "family": state.interior_pattern.family.value,
            "t": state.interior_pattern.t,
        },
    }


@dataclass
class Session:
    id: str
    state: GameState
    history: list[dict] = field(default_factory=list)
    undo_stack: list[GameState] = field(default_factory=list)
    created_at: float = field(default_factory=time.time)
    lock: threading.Lock = field(default_factory=threading.Lock)


class SessionRegistry:
    def __init__(self) -> None:
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def create(self, state: GameState) -> Session:
        session = Session(id=uuid.uuid4().hex, state=state)
        with self._lock:
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Optional[Session]:
        with self._lock:
            return self._sessions.get(session_id)

    def close(self, session_id: str) -> bool:
        with self._lock:
            return self._sessions.pop(session_id, None) is not None


def _plan_json(plan: MovePlan) -> list:
    return [[list(a), list(b)] for a, b in sorted(plan.pairs)]


class ProtocolHandler:
    """Transport-independent message handling: one JSON line in, one out."""

    def __init__(self, registry: Optional[SessionRegistry] = None):
        self.registry = registry or SessionRegistry()

    def handle_line(self, line: str) -> str:
        try:
            reply = self._dispatch(line)
        except Exception as exc:  # the server must never die on bad input
            reply = {"type": "PROTOCOL_ERROR", "detail": f"internal: {exc}"}
        return json.dumps(reply, separators=(",", ":"), sort_keys=True)

    def _dispatch(self, line: str) -> dict:
        try:
            msg = json.loads(line)
        except json.JSONDecodeError as exc:
            return {
                "type": "PROTOCOL_ERROR",
                "detail": f"malformed JSON: {exc.msg}",
                "position": exc.pos,
            }
        if not isinstance(msg, dict) or "type" not in msg:
            return {"type": "PROTOCOL_ERROR", "detail": "missing message type"}
        mtype = msg["type"]
        if mtype == "NEW_SESSION":
            return self._new_session(msg)
        if mtype == "ATTACK":
            return self._attack(msg)
        if mtype == "UNDO":
            return self._undo(msg)
        if mtype == "RESUME":
            return self._resume(msg)
        if mtype == "HINT":
            return self._hint(msg)
        if mtype == "CLOSE":
            return self._close(msg)
        return {"type": "PROTOCOL_ERROR", "detail": f"unknown type {mtype!r}"}

    def _new_session(self, msg: dict) -> dict:
        try:
            m, n = int(msg["m"]), int(msg["n"])
            variant = Variant(msg.get("variant", "improved"))
        except (KeyError, ValueError, TypeError) as exc:
            return {"type": "PROTOCOL_ERROR", "detail": f"bad NEW_SESSION fields: {exc}"}
        try:
            state = init_state(variant, m, n)
        except BadDimensions as exc:
            return {"type": "REJECTED", "reason": "BAD_DIMENSIONS", "detail": str(exc)}
        session = self.registry.create(state)
        return {
            "type": "SESSION_CREATED",
            "id": session.id,
            "state": state_snapshot(state),
        }

    def _with_session(self, msg: dict):
        sid = msg.get("id")
        if not isinstance(sid, str):
            return None, {"type": "PROTOCOL_ERROR", "detail": "missing session id"}
        session = self.registry.get(sid)
        if session is None:
            return None, {"type": "REJECTED", "reason": "NO_SESSION", "id": sid}
        return session, None

    def _attack(self, msg: dict) -> dict:
        session, err = self._with_session(msg)
        if err:
            return err
        cell = msg.get("cell")
        if (
            not isinstance(cell, (list, tuple))
            or len(cell) != 2
            or not all(isinstance(x, int) for x in cell)
        ):
            return {"type": "PROTOCOL_ERROR", "detail": "cell must be [row, col]"}
        attack = (cell[0], cell[1])
        with session.lock:
            before = session.state
            try:
                after, plan = step_state(before, attack)
            except AttackOnGuard:
                return {"type": "REJECTED", "reason": "ATTACK_ON_GUARD", "cell": list(attack)}
            except AttackOutOfBounds:
                return {"type": "REJECTED", "reason": "OUT_OF_BOUNDS", "cell": list(attack)}
            flags = check_invariants(before, after, attack, plan)
            session.undo_stack.append(before)
            session.state = after
            reply = {
                "type": "MOVE_REPORT",
                "id": session.id,
                "attack": list(attack),
                "plan": _plan_json(plan),
                "state": state_snapshot(after),
                "invariant_flags": dict(sorted(flags.items())),
            }
            session.history.append(reply)
            return reply

    def _undo(self, msg: dict) -> dict:
        session, err = self._with_session(msg)
        if err:
            return err
        with session.lock:
            if session.undo_stack:
                session.state = session.undo_stack.pop()
            session.history.append({"type": "UNDO", "round": session.state.round})
            return {
                "type": "SNAPSHOT",
                "id": session.id,
                "state": state_snapshot(session.state),
            }

    def _resume(self, msg: dict) -> dict:
        """Non-mutating snapshot read so a reconnecting client can render
        the identical board from nothing but its session id."""
        session, err = self._with_session(msg)
        if err:
            return err
        with session.lock:
            return {
                "type": "SNAPSHOT",
                "id": session.id,
                "state": state_snapshot(session.state),
            }

    def _hint(self, msg: dict) -> dict:
        session, err = self._with_session(msg)
        if err:
            return err
        with session.lock:
            cell = greedy_attack(session.state)
        return {"type": "HINT_RESULT", "id": session.id, "cell": list(cell)}

    def _close(self, msg: dict) -> dict:
        session, err = self._with_session(msg)
        if err:
            return err
        self.registry.close(session.id)
        return {"type": "CLOSED", "id": session.id}


class _LineHandler(socketserver.StreamRequestHandler):
    def handle(self) -> None:
        handler: ProtocolHandler = self.server.protocol  # type: ignore[attr-defined]
        while True:
            raw = self.rfile.readline()
            if not raw:
                break
            line = raw.decode("utf-8", errors="replace").strip()
            if not line:
                continue
            reply = handler.handle_line(line)
            self.wfile.write(reply.encode("utf-8") + b"\n")
            self.wfile.flush()


class SessionServer(socketserver.ThreadingTCPServer):
    allow_reuse_address = True
    daemon_threads = True

    def __init__(self, host: str = "127.0.0.1", port: int = DEFAULT_PORT,
                 handler: Optional[ProtocolHandler] = None):
        super().__init__((host, port), _LineHandler)
        self.protocol = handler or ProtocolHandler()


def serve_forever(host: str = "127.0.0.1", port: int = DEFAULT_PORT) -> None:
    with SessionServer(host, port) as server:
        server.serve_forever()
