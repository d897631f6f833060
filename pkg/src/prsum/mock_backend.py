"""Bundled mock generation backend.

Implements the generation wire protocol with echo semantics: the summary is
the source's first ``max_tokens`` word tokens. Lets the whole evaluation
pipeline run with no model and no network beyond localhost. Fault-injection
knobs (artificial latency, canned error statuses, malformed payloads) back
the client's failure-path tests.

Run standalone with ``python -m prsum.mock_backend --port 8080``.
"""

from __future__ import annotations

import argparse
import json
import threading
import time
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from prsum.tokens import tokenize_words


@dataclass
class FaultPlan:
    """Optional misbehaviour for exercising client error handling."""

    latency_s: float = 0.0
    generate_statuses: list[int] = field(default_factory=list)  # consumed first-to-last
    malformed_health: bool = False
    drop_summary_field: bool = False


def echo_summary(source: str, max_tokens: int) -> str:
    return " ".join(tokenize_words(source).tokens[:max_tokens])


class _Handler(BaseHTTPRequestHandler):
    server_version = "MockBackend/0.1"

    def _send_json(self, status: int, payload: dict | str) -> None:
        body = payload.encode("utf-8") if isinstance(payload, str) else json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def do_GET(self) -> None:  # noqa: N802 (http.server naming)
        if self.path != "/v1/health":
            self._send_json(404, {"error": "not found"})
            return
        if self.server.faults.malformed_health:
            self._send_json(200, '{"nam')
            return
        self._send_json(200, {"name": self.server.backend_name, "ready": True})

    def do_POST(self) -> None:  # noqa: N802
        if self.path != "/v1/generate":
            self._send_json(404, {"error": "not found"})
            return
        faults = self.server.faults
        if faults.latency_s:
            time.sleep(faults.latency_s)
        with self.server.fault_lock:
            if faults.generate_statuses:
                status = faults.generate_statuses.pop(0)
                self._send_json(status, {"error": f"injected {status}"})
                return
        length = int(self.headers.get("Content-Length", "0"))
        try:
            payload = json.loads(self.rfile.read(length))
            request_id = payload["id"]
            source = payload["source"]
            max_tokens = int(payload.get("max_tokens", 50))
        except (ValueError, KeyError, TypeError):
            self._send_json(400, {"error": "malformed request body"})
            return
        response = {"id": request_id, "summary": echo_summary(source, max_tokens)}
        if faults.drop_summary_field:
            del response["summary"]
        self._send_json(200, response)

    def log_message(self, format: str, *args) -> None:  # silence request logging
        pass


class MockBackend:
    """Echo backend running on a local thread; usable as a context manager."""

    def __init__(self, host: str = "127.0.0.1", port: int = 0, name: str = "mock-echo", faults: FaultPlan | None = None):
        self._server = ThreadingHTTPServer((host, port), _Handler)
        self._server.backend_name = name
        self._server.faults = faults or FaultPlan()
        self._server.fault_lock = threading.Lock()
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}"

    def start(self) -> "MockBackend":
        self._thread.start()
        return self

    def stop(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockBackend":
        return self.start()

    def __exit__(self, *exc_info) -> None:
        self.stop()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description="Run the bundled echo generation backend.")
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    args = parser.parse_args(argv)
    backend = MockBackend(host=args.host, port=args.port).start()
    print(f"mock backend listening on {backend.url}")
    try:
        while True:
            time.sleep(3600)
    except KeyboardInterrupt:
        backend.stop()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
