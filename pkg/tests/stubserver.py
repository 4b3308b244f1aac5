"""In-process stand-ins for the network: a completions stub and a live app server."""

from __future__ import annotations

import json
import socket
import threading
import time
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import uvicorn


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class StubRemoteServer:
    """Scriptable OpenAI-compatible completions endpoint.

    Records every request (path, headers, parsed JSON body). Responses are
    popped from ``responses`` when queued, else a 200 completions payload
    with ``default_text`` is returned. ``delay`` sleeps before answering,
    for timeout tests.
    """

    def __init__(self):
        self.requests: list[dict] = []
        self.responses: list[tuple[int, object]] = []
        self.default_text = "stub completion"
        self.delay = 0.0
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    def queue(self, status: int, payload: object) -> None:
        """Queue one response; dict payloads are sent as JSON, str as raw text."""
        self.responses.append((status, payload))

    @property
    def base_url(self) -> str:
        assert self._httpd is not None
        return f"http://127.0.0.1:{self._httpd.server_address[1]}"

    def start(self) -> "StubRemoteServer":
        stub = self

        class Handler(BaseHTTPRequestHandler):
            def do_POST(self):  # noqa: N802
                length = int(self.headers.get("Content-Length", "0"))
                raw = self.rfile.read(length) if length else b"{}"
                stub.requests.append(
                    {
                        "path": self.path,
                        "headers": dict(self.headers),
                        "body": json.loads(raw.decode("utf-8")),
                    }
                )
                if stub.delay:
                    time.sleep(stub.delay)
                if stub.responses:
                    status, payload = stub.responses.pop(0)
                else:
                    status, payload = 200, {"choices": [{"text": stub.default_text}]}
                data = (
                    json.dumps(payload) if isinstance(payload, dict) else str(payload)
                ).encode("utf-8")
                try:
                    self.send_response(status)
                    self.send_header("Content-Type", "application/json")
                    self.send_header("Content-Length", str(len(data)))
                    self.end_headers()
                    self.wfile.write(data)
                except (BrokenPipeError, ConnectionResetError):
                    pass  # client gave up (timeout tests)

            def log_message(self, *args):  # silence test output
                pass

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
        if self._thread is not None:
            self._thread.join(timeout=5)

    def __enter__(self) -> "StubRemoteServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()


class LiveServer:
    """A real uvicorn server running the app in a background thread."""

    def __init__(self, app):
        self.port = free_port()
        self._config = uvicorn.Config(app, host="127.0.0.1", port=self.port, log_level="error")
        self._server = uvicorn.Server(self._config)
        self._thread = threading.Thread(target=self._server.run, daemon=True)

    @property
    def base_url(self) -> str:
        return f"http://127.0.0.1:{self.port}"

    def __enter__(self) -> "LiveServer":
        self._thread.start()
        deadline = time.monotonic() + 10
        while not self._server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("live server failed to start within 10s")
            time.sleep(0.01)
        return self

    def __exit__(self, *exc) -> None:
        self._server.should_exit = True
        self._thread.join(timeout=10)
