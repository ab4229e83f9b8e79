"""HTTP service exposing one live workflow over the JSON protocol.

Three API routes drive the session: ``GET /initial-task`` describes the
current state (instantiating the program on first call), ``POST /interact``
applies one concrete input, and ``GET /reset`` starts over from a fresh
program instance. ``GET /`` and ``GET /assets/*`` serve the browser UI
bundle when one is configured.
"""

from __future__ import annotations

import json
import socket
import threading
from dataclasses import dataclass
from pathlib import Path

import uvicorn
from starlette.applications import Starlette
from starlette.requests import Request
from starlette.responses import FileResponse, HTMLResponse, JSONResponse
from starlette.routing import Mount, Route
from starlette.staticfiles import StaticFiles

from .protocol import Json, ProtocolError, decode_input, describe
from .semantics import (
    EngineError,
    LabelDisabled,
    TypeMismatch,
    UnknownId,
    handle,
    normalize,
)
from .tasks import Heap, Task, TaskTemplate, instantiate

DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 3000

_FALLBACK_PAGE = """<!doctype html>
<html>
  <head><meta charset="utf-8"><title>topflow</title></head>
  <body>
    <h1>topflow backend is running</h1>
    <p>No UI bundle is configured. Point <code>--assets-dir</code> at a built
    frontend, or drive the JSON API directly: <code>GET /initial-task</code>,
    <code>POST /interact</code>, <code>GET /reset</code>.</p>
  </body>
</html>
"""


class ServerStartupError(Exception):
    pass


class SessionState:
    """The single live task instance, guarded by one lock so concurrent
    interactions apply in a total order."""

    def __init__(self, program: Task | TaskTemplate) -> None:
        self._program = program
        self._lock = threading.Lock()
        self._task: Task | None = None
        self._heap: Heap | None = None

    def _ensure_initialized(self) -> tuple[Task, Heap]:
        if self._task is None or self._heap is None:
            task, heap = instantiate(self._program)
            self._task, self._heap = normalize(task, heap)
        return self._task, self._heap

    def describe_current(self) -> Json:
        with self._lock:
            task, heap = self._ensure_initialized()
            return describe(task, heap)

    def interact(self, wire_input: Json) -> Json:
        with self._lock:
            task, heap = self._ensure_initialized()
            concrete = decode_input(wire_input)
            new_task, new_heap = handle(task, heap, concrete)
            self._task, self._heap = new_task, new_heap
            return describe(new_task, new_heap)

    def reset(self) -> Json:
        with self._lock:
            self._task = None
            self._heap = None
            task, heap = self._ensure_initialized()
            return describe(task, heap)


def _error_response(exc: Exception) -> JSONResponse:
    if isinstance(exc, ProtocolError):
        status = 400
    elif isinstance(exc, (UnknownId, TypeMismatch, LabelDisabled)):
        status = 422
    elif isinstance(exc, EngineError):
        status = 500
    else:
        raise exc
    return JSONResponse({"error": exc.code, "detail": str(exc)}, status_code=status)


def create_app(program: Task | TaskTemplate, assets_dir: str | Path | None = None) -> Starlette:
    """Builds the ASGI application serving `program`."""
    state = SessionState(program)
    assets = Path(assets_dir) if assets_dir is not None else None

    async def initial_task(_: Request) -> JSONResponse:
        try:
            return JSONResponse(state.describe_current())
        except (ProtocolError, EngineError) as exc:
            return _error_response(exc)

    async def interact(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError as exc:
            return JSONResponse(
                {"error": "malformed-json", "detail": f"request body is not JSON: {exc}"},
                status_code=400,
            )
        try:
            return JSONResponse(state.interact(body))
        except (ProtocolError, EngineError) as exc:
            return _error_response(exc)

    async def reset(_: Request) -> JSONResponse:
        try:
            return JSONResponse(state.reset())
        except (ProtocolError, EngineError) as exc:
            return _error_response(exc)

    async def index(_: Request):
        if assets is not None:
            page = assets / "index.html"
            if page.is_file():
                return FileResponse(page)
        return HTMLResponse(_FALLBACK_PAGE)

    routes = [
        Route("/initial-task", initial_task, methods=["GET"]),
        Route("/interact", interact, methods=["POST"]),
        Route("/reset", reset, methods=["GET"]),
        Route("/", index, methods=["GET"]),
    ]
    if assets is not None:
        routes.append(
            Mount("/assets", StaticFiles(directory=assets, check_dir=False), name="assets")
        )
    return Starlette(routes=routes)


@dataclass
class RunningServer:
    """Handle to a server started with ``block=False``."""

    host: str
    port: int
    _server: uvicorn.Server
    _thread: threading.Thread

    @property
    def url(self) -> str:
        return f"http://{self.host}:{self.port}"

    def stop(self, timeout: float = 5.0) -> None:
        self._server.should_exit = True
        self._thread.join(timeout)


def visualize_task(
    program: Task | TaskTemplate,
    *,
    host: str = DEFAULT_HOST,
    port: int = DEFAULT_PORT,
    assets_dir: str | Path | None = None,
    log_level: str = "info",
    block: bool = True,
) -> RunningServer | None:
    """Serves `program` on host:port until interrupted.

    Port 0 binds an OS-assigned port, reported on startup. With
    ``block=False`` the server runs on a background thread and a handle with
    the bound port and a ``stop()`` method is returned.
    """
    app = create_app(program, assets_dir=assets_dir)
    try:
        sock = socket.create_server((host, port))
    except OSError as exc:
        raise ServerStartupError(f"cannot listen on {host}:{port}: {exc}") from exc
    bound_port = sock.getsockname()[1]
    config = uvicorn.Config(app, host=host, port=bound_port, log_level=log_level)
    server = uvicorn.Server(config)
    print(f"topflow: serving on http://{host}:{bound_port}", flush=True)
    if block:
        try:
            server.run(sockets=[sock])
        finally:
            sock.close()
        return None
    thread = threading.Thread(
        target=server.run, kwargs={"sockets": [sock]}, daemon=True, name="topflow-server"
    )
    thread.start()
    while not server.started and thread.is_alive():
        threading.Event().wait(0.01)
    if not thread.is_alive():
        sock.close()
        raise ServerStartupError(f"server on {host}:{bound_port} exited during startup")
    return RunningServer(host=host, port=bound_port, _server=server, _thread=thread)
