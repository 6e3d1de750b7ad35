"""Localhost HTTP server wrapping the mini SPARQL engine.

Speaks enough of the SPARQL protocol for the gateway: query via GET
parameter or form POST, JSON results body. Misbehaviour modes simulate
broken endpoints (HTML-only responses, slow answers) for probe and
concurrency tests.
"""

from __future__ import annotations

import threading
import time
import urllib.parse
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

from ..gateway import RESULTS_JSON_MEDIA_TYPE, serialize_results_json
from .graph import Triple, build_bells_graph
from .minisparql import QueryError, evaluate


class MockSparqlServer:
    """In-process SPARQL endpoint bound to an ephemeral localhost port.

    mode: "normal" serves results JSON; "html_only" ignores the Accept
    header and answers every request with an HTML page.
    delay: seconds to sleep per request (concurrency tests).
    """

    def __init__(self, graph: list[Triple] | None = None, *,
                 mode: str = "normal", delay: float = 0.0):
        self.graph = graph if graph is not None else build_bells_graph()
        self.mode = mode
        self.delay = delay
        self.request_count = 0
        self._active = 0
        self.max_active = 0
        self._lock = threading.Lock()
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):
                pass

            def do_GET(self):
                parsed = urllib.parse.urlparse(self.path)
                if parsed.path != "/sparql":
                    self.send_error(404)
                    return
                params = urllib.parse.parse_qs(parsed.query)
                outer._handle(self, params.get("query", [None])[0])

            def do_POST(self):
                parsed = urllib.parse.urlparse(self.path)
                if parsed.path != "/sparql":
                    self.send_error(404)
                    return
                length = int(self.headers.get("Content-Length", "0"))
                body = self.rfile.read(length)
                ctype = (self.headers.get("Content-Type") or "").split(";")[0].strip()
                if ctype == "application/sparql-query":
                    query = body.decode("utf-8", errors="replace")
                else:
                    params = urllib.parse.parse_qs(body.decode("utf-8", errors="replace"))
                    query = params.get("query", [None])[0]
                outer._handle(self, query)

        self._server = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)

    # -- lifecycle -----------------------------------------------------------

    def start(self) -> "MockSparqlServer":
        self._thread.start()
        return self

    def close(self) -> None:
        self._server.shutdown()
        self._server.server_close()

    def __enter__(self) -> "MockSparqlServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.close()

    @property
    def url(self) -> str:
        host, port = self._server.server_address[:2]
        return f"http://{host}:{port}/sparql"

    # -- request handling ------------------------------------------------------

    def _handle(self, handler: BaseHTTPRequestHandler, query: str | None) -> None:
        with self._lock:
            self.request_count += 1
            self._active += 1
            self.max_active = max(self.max_active, self._active)
        try:
            if self.delay:
                time.sleep(self.delay)
            if self.mode == "html_only":
                body = b"<html><body><h1>SPARQL endpoint</h1></body></html>"
                handler.send_response(200)
                handler.send_header("Content-Type", "text/html; charset=utf-8")
                handler.send_header("Content-Length", str(len(body)))
                handler.end_headers()
                handler.wfile.write(body)
                return
            if not query:
                self._send_plain(handler, 400, "missing 'query' parameter")
                return
            try:
                rs = evaluate(query, self.graph)
            except QueryError as exc:
                self._send_plain(handler, 400, f"query error: {exc}")
                return
            body = serialize_results_json(rs)
            handler.send_response(200)
            handler.send_header("Content-Type", RESULTS_JSON_MEDIA_TYPE)
            handler.send_header("Content-Length", str(len(body)))
            handler.end_headers()
            handler.wfile.write(body)
        finally:
            with self._lock:
                self._active -= 1

    @staticmethod
    def _send_plain(handler: BaseHTTPRequestHandler, status: int, message: str) -> None:
        body = message.encode("utf-8")
        handler.send_response(status)
        handler.send_header("Content-Type", "text/plain; charset=utf-8")
        handler.send_header("Content-Length", str(len(body)))
        handler.end_headers()
        handler.wfile.write(body)
