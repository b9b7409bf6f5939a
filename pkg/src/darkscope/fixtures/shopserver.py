"""Tiny scripted HTTP server standing in for the live web.

Virtual-hosted: the Host header picks the site, so one loopback port serves
many logical domains (the browser's HttpFetcher maps hostnames here).
Pages are strings or callables of the per-path visit count, which is how
timer and stock fixtures script dynamic behavior per visit.
"""

from __future__ import annotations

import threading
from collections import defaultdict
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Callable, Union

PageContent = Union[str, bytes, Callable[[int], Union[str, bytes]]]


class FixtureShopServer:
    def __init__(self):
        self.sites: dict[str, dict[str, PageContent]] = {}
        self.visit_counts: dict[tuple[str, str], int] = defaultdict(int)
        self._lock = threading.Lock()
        self._httpd: ThreadingHTTPServer | None = None
        self._thread: threading.Thread | None = None

    def add_site(self, host: str, pages: dict[str, PageContent]) -> None:
        self.sites[host.lower()] = dict(pages)

    @property
    def port(self) -> int:
        assert self._httpd is not None, "server not started"
        return self._httpd.server_address[1]

    def host_map(self) -> dict[str, tuple[str, int]]:
        return {host: ("127.0.0.1", self.port) for host in self.sites}

    def visits(self, host: str, path: str) -> int:
        return self.visit_counts[(host.lower(), path)]

    # -- lifecycle -------------------------------------------------------------

    def start(self) -> "FixtureShopServer":
        outer = self

        class Handler(BaseHTTPRequestHandler):
            def log_message(self, *args):  # keep tests quiet
                pass

            def do_GET(self):
                host = (self.headers.get("Host") or "").split(":")[0].lower()
                path = self.path.split("?")[0] or "/"
                pages = outer.sites.get(host)
                if pages is None or path not in pages:
                    self.send_response(404)
                    self.end_headers()
                    self.wfile.write(b"not found")
                    return
                with outer._lock:
                    outer.visit_counts[(host, path)] += 1
                    count = outer.visit_counts[(host, path)]
                content = pages[path]
                if callable(content):
                    content = content(count)
                body = content.encode("utf-8") if isinstance(content, str) else content
                mime = "text/html; charset=utf-8"
                if path.endswith(".js"):
                    mime = "application/javascript"
                elif path.endswith(".json"):
                    mime = "application/json"
                self.send_response(200)
                self.send_header("Content-Type", mime)
                self.send_header("Content-Length", str(len(body)))
                self.end_headers()
                self.wfile.write(body)

        self._httpd = ThreadingHTTPServer(("127.0.0.1", 0), Handler)
        self._thread = threading.Thread(target=self._httpd.serve_forever, daemon=True)
        self._thread.start()
        return self

    def stop(self) -> None:
        if self._httpd is not None:
            self._httpd.shutdown()
            self._httpd.server_close()
            self._httpd = None

    def __enter__(self) -> "FixtureShopServer":
        return self.start()

    def __exit__(self, *exc) -> None:
        self.stop()
