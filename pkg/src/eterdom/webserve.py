"""HTTP static hosting plus a websocket bridge to the session protocol.

Browsers cannot open raw TCP sockets, so the `serve` command exposes the
same line protocol over a websocket at /ws: each text frame is one protocol
message, verbatim. Requires the optional [serve] extra.

No postponed annotations in this module: the websocket route's parameter
annotation must be a real class at runtime for the framework to inject it.
"""

from pathlib import Path

from .service import ProtocolHandler


def build_app(static_dir: str, handler: ProtocolHandler):
    from fastapi import FastAPI, WebSocket, WebSocketDisconnect
    from fastapi.responses import FileResponse
    from fastapi.staticfiles import StaticFiles

    app = FastAPI()
    static = Path(static_dir)

    @app.websocket("/ws")
    async def ws_endpoint(ws: WebSocket):
        await ws.accept()
        try:
            while True:
                line = await ws.receive_text()
                await ws.send_text(handler.handle_line(line))
        except WebSocketDisconnect:
            pass

    if static.is_dir():
        index = static / "index.html"
        if index.exists():

            @app.get("/")
            async def root():
                return FileResponse(index)

        app.mount("/", StaticFiles(directory=str(static)), name="static")

    return app


def run_http_bridge(port: int, static_dir: str, handler: ProtocolHandler) -> None:
    import uvicorn

    uvicorn.run(build_app(static_dir, handler), host="127.0.0.1", port=port, log_level="warning")
