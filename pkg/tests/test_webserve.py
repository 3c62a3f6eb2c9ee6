import json

import pytest

fastapi = pytest.importorskip("fastapi")

from eterdom.service import ProtocolHandler
from eterdom.webserve import build_app


@pytest.fixture()
def ws_client(tmp_path):
    from fastapi.testclient import TestClient

    (tmp_path / "index.html").write_text("<html>board</html>")
    app = build_app(str(tmp_path), ProtocolHandler())
    return TestClient(app)


def test_static_index_served(ws_client):
    r = ws_client.get("/")
    assert r.status_code == 200 and "board" in r.text


def test_websocket_carries_protocol_verbatim(ws_client):
    with ws_client.websocket_connect("/ws") as ws:
        ws.send_text(json.dumps({"type": "NEW_SESSION", "m": 7, "n": 7, "variant": "improved"}))
        created = json.loads(ws.receive_text())
        assert created["type"] == "SESSION_CREATED"
        assert len(created["state"]["cells"]) == 21
        guarded = created["state"]["cells"][0]
        ws.send_text(json.dumps({"type": "ATTACK", "id": created["id"], "cell": guarded}))
        rejected = json.loads(ws.receive_text())
        assert rejected["reason"] == "ATTACK_ON_GUARD"
        ws.send_text("garbage")
        err = json.loads(ws.receive_text())
        assert err["type"] == "PROTOCOL_ERROR"