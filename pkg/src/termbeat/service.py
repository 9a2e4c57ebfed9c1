"""HTTP service around a session: module store, control surface, state feed."""

from __future__ import annotations

import json
import queue
from pathlib import Path

from fastapi import FastAPI, Header, HTTPException
from fastapi.responses import HTMLResponse, JSONResponse, StreamingResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel

from termbeat.session import Session, snapshot_to_json

KEEPALIVE_SECONDS = 15.0

_PLACEHOLDER_PAGE = """<!doctype html>
<html><head><title>termbeat</title></head>
<body><p>termbeat session is running. No UI bundle is installed;
talk to the API under <code>/api/</code>.</p></body></html>
"""


class EditableSubmission(BaseModel):
    editableText: str
    baseVersion: int


class FullSubmission(BaseModel):
    fullText: str


class ControlRequest(BaseModel):
    command: str
    mode: str | None = None
    pauseMs: int | None = None


def create_app(session: Session, token: str | None = None, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="termbeat", docs_url=None, redoc_url=None)

    def check_token(header_value: str | None) -> None:
        if token is not None and header_value != token:
            raise HTTPException(status_code=401, detail="missing or wrong conductor token")

    @app.get("/api/modules")
    def list_modules() -> list[dict]:
        return session.list_modules()

    @app.get("/api/modules/{name}")
    def get_module(name: str) -> dict:
        module = session.get_module(name)
        if module is None:
            raise HTTPException(status_code=404, detail=f"no module `{name}`")
        return module

    @app.post("/api/modules/{name}/editable")
    def submit_editable(name: str, body: EditableSubmission) -> JSONResponse:
        status, payload = session.submit_editable(name, body.editableText, body.baseVersion)
        return JSONResponse(payload, status_code=status)

    @app.put("/api/modules/{name}")
    def submit_full(
        name: str,
        body: FullSubmission,
        x_conductor_token: str | None = Header(default=None),
    ) -> JSONResponse:
        check_token(x_conductor_token)
        status, payload = session.submit_full(name, body.fullText)
        return JSONResponse(payload, status_code=status)

    @app.post("/api/control")
    def control(
        body: ControlRequest,
        x_conductor_token: str | None = Header(default=None),
    ) -> JSONResponse:
        check_token(x_conductor_token)
        status, payload = session.control(body.command, body.mode, body.pauseMs)
        return JSONResponse(payload, status_code=status)

    @app.get("/api/snapshot")
    def snapshot() -> dict:
        return snapshot_to_json(session.snapshot)

    @app.get("/api/feed")
    def feed() -> StreamingResponse:
        def gen():
            q = session.subscribe()
            try:
                while True:
                    try:
                        snap = q.get(timeout=KEEPALIVE_SECONDS)
                    except queue.Empty:
                        yield ": keepalive\n\n"
                        continue
                    yield f"data: {json.dumps(snapshot_to_json(snap))}\n\n"
            finally:
                session.unsubscribe(q)

        return StreamingResponse(
            gen(),
            media_type="text/event-stream",
            headers={"Cache-Control": "no-cache", "X-Accel-Buffering": "no"},
        )

    bundle = Path(ui_dir) if ui_dir is not None else None
    if bundle is not None and bundle.is_dir():
        app.mount("/", StaticFiles(directory=bundle, html=True), name="ui")
    else:

        @app.get("/", include_in_schema=False)
        def index() -> HTMLResponse:
            return HTMLResponse(_PLACEHOLDER_PAGE)

    return app
