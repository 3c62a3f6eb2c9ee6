import json
import socket
import threading

import pytest

from eterdom.finite import Variant, init_state, step_state
from eterdom.service import ProtocolHandler, SessionServer, state_snapshot


@pytest.fixture()
def server():
    srv = SessionServer(port=0)
    threading.Thread(target=srv.serve_forever, daemon=True).start()
    yield srv
    srv.shutdown()
    srv.server_close()


@pytest.fixture()
def client(server):
    sock = socket.create_connection(("127.0.0.1", server.server_address[1]), timeout=5)
    f = sock.makefile("rw", encoding="utf-8")

    def send(msg):
        text = msg if isinstance(msg, str) else json.dumps(msg)
        f.write(text + "\n")
        f.flush()
        return json.loads(f.readline())

    yield send
    sock.close()


def test_new_session_improved_7x7(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    assert r["type"] == "SESSION_CREATED"
    assert len(r["state"]["cells"]) == 21
    assert r["state"]["round"] == 0


def test_attack_on_guard_rejected(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    guarded = r["state"]["cells"][0]
    r2 = client({"type": "ATTACK", "id": r["id"], "cell": guarded})
    assert r2["type"] == "REJECTED" and r2["reason"] == "ATTACK_ON_GUARD"


def test_attack_move_report_flags_true(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    cells = {tuple(c) for c in r["state"]["cells"]}
    free = next((rr, cc) for rr in range(7) for cc in range(7) if (rr, cc) not in cells)
    r2 = client({"type": "ATTACK", "id": r["id"], "cell": list(free)})
    assert r2["type"] == "MOVE_REPORT"
    assert all(r2["invariant_flags"].values())
    assert list(free) in [p[1] for p in r2["plan"]] or list(free) in [c for c in r2["state"]["cells"]]


def test_out_of_bounds_and_no_session(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    r2 = client({"type": "ATTACK", "id": r["id"], "cell": [99, 0]})
    assert r2["reason"] == "OUT_OF_BOUNDS"
    r3 = client({"type": "ATTACK", "id": "deadbeef", "cell": [0, 0]})
    assert r3["reason"] == "NO_SESSION"


def test_undo_then_replay_is_deterministic(client):
    r = client({"type": "NEW_SESSION", "m": 12, "n": 12, "variant": "improved"})
    cells = {tuple(c) for c in r["state"]["cells"]}
    free = next((rr, cc) for rr in range(12) for cc in range(12) if (rr, cc) not in cells)
    first = client({"type": "ATTACK", "id": r["id"], "cell": list(free)})
    undone = client({"type": "UNDO", "id": r["id"]})
    assert undone["type"] == "SNAPSHOT" and undone["state"]["round"] == 0
    assert undone["state"]["hash"] == r["state"]["hash"]
    again = client({"type": "ATTACK", "id": r["id"], "cell": list(free)})
    assert again["plan"] == first["plan"]
    assert again["state"]["hash"] == first["state"]["hash"]


def test_resume_is_nonmutating(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    cells = {tuple(c) for c in r["state"]["cells"]}
    free = next((rr, cc) for rr in range(7) for cc in range(7) if (rr, cc) not in cells)
    moved = client({"type": "ATTACK", "id": r["id"], "cell": list(free)})
    snap1 = client({"type": "RESUME", "id": r["id"]})
    snap2 = client({"type": "RESUME", "id": r["id"]})
    assert snap1["type"] == "SNAPSHOT"
    assert snap1["state"] == moved["state"] == snap2["state"]


def test_hint_suggests_unguarded_cell(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    hint = client({"type": "HINT", "id": r["id"]})
    assert hint["type"] == "HINT_RESULT"
    assert tuple(hint["cell"]) not in {tuple(c) for c in r["state"]["cells"]}


def test_close_session(client):
    r = client({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"})
    assert client({"type": "CLOSE", "id": r["id"]}) == {"type": "CLOSED", "id": r["id"]}
    r2 = client({"type": "ATTACK", "id": r["id"], "cell": [0, 1]})
    assert r2["reason"] == "NO_SESSION"


def test_malformed_messages(client):
    r = client("not json at all")
    assert r["type"] == "PROTOCOL_ERROR" and "position" in r
    r = client({"no": "type"})
    assert r["type"] == "PROTOCOL_ERROR"
    r = client({"type": "TELEPORT"})
    assert r["type"] == "PROTOCOL_ERROR"
    r = client({"type": "ATTACK", "id": "x", "cell": "nope"})
    assert r["type"] in ("PROTOCOL_ERROR", "REJECTED")


def test_bad_dimensions_rejected(client):
    r = client({"type": "NEW_SESSION", "m": 8, "n": 8, "variant": "improved"})
    assert r["type"] == "REJECTED" and r["reason"] == "BAD_DIMENSIONS"


def test_service_replay_equals_direct_engine():
    # the service adds no behavior on top of the step functions
    handler = ProtocolHandler()
    created = json.loads(
        handler.handle_line(json.dumps({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "full"}))
    )
    sid = created["id"]
    state = init_state(Variant.FULL_BOUNDARY, 7, 7)
    assert state_snapshot(state) == created["state"]
    attacks = []
    for _ in range(25):
        free = sorted(c for c in state.dims.cells() if c not in state.placement.cells)
        attack = free[0]
        attacks.append(attack)
        reply = json.loads(
            handler.handle_line(json.dumps({"type": "ATTACK", "id": sid, "cell": list(attack)}))
        )
        state, _ = step_state(state, attack)
        assert reply["state"] == state_snapshot(state)
