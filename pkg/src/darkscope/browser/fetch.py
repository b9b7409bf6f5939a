"""Fetchers used by the fixture browser.

`HttpFetcher` speaks real HTTP but resolves hostnames through an explicit
host map (logical hostname -> local address), so fixture servers can run on
loopback while pages and HAR entries keep realistic third-party URLs.
"""

from __future__ import annotations

import http.client
import time
from dataclasses import dataclass, field
from pathlib import Path
from urllib.parse import urlsplit

from darkscope.errors import NavigationError


@dataclass
class FetchResult:
    url: str
    status: int
    mime_type: str
    body: bytes
    headers: dict[str, str] = field(default_factory=dict)
    started_at: float = 0.0
    duration_ms: float = 0.0

    @property
    def text(self) -> str:
        return self.body.decode("utf-8", errors="replace")


class MappingFetcher:
    """In-memory fetcher: {url: html or bytes}."""

    def __init__(self, pages: dict[str, str | bytes]):
        self.pages = dict(pages)
        self.fetch_count = 0

    def fetch(self, url: str) -> FetchResult:
        self.fetch_count += 1
        if url not in self.pages:
            raise NavigationError(f"no fixture page for {url}")
        body = self.pages[url]
        if isinstance(body, str):
            body = body.encode("utf-8")
        mime = "text/html" if url.endswith((".html", "/")) or b"<" in body[:64] else "text/plain"
        return FetchResult(url=url, status=200, mime_type=mime, body=body, started_at=time.time())


class DirectoryFetcher:
    """Serves `https://<host>/<path>` from `<root>/<host>/<path>`; a bare `/`
    maps to index.html."""

    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.fetch_count = 0

    def fetch(self, url: str) -> FetchResult:
        self.fetch_count += 1
        parts = urlsplit(url)
        path = parts.path or "/"
        if path.endswith("/"):
            path += "index.html"
        local = self.root / (parts.hostname or "") / path.lstrip("/")
        if not local.is_file():
            raise NavigationError(f"fixture file missing for {url}: {local}")
        mime = "text/html" if local.suffix in (".html", ".htm") else "application/octet-stream"
        return FetchResult(url=url, status=200, mime_type=mime, body=local.read_bytes(),
                           started_at=time.time())


class HttpFetcher:
    """Real HTTP with hostname aliasing.

    `host_map` maps logical hostnames to (address, port); unlisted hosts are
    refused rather than reaching the live network.
    """

    def __init__(self, host_map: dict[str, tuple[str, int]], timeout: float = 10.0):
        self.host_map = dict(host_map)
        self.timeout = timeout
        self.fetch_count = 0

    def fetch(self, url: str) -> FetchResult:
        self.fetch_count += 1
        parts = urlsplit(url)
        host = parts.hostname or ""
        if host not in self.host_map:
            raise NavigationError(f"host not in fixture map: {host}")
        addr, port = self.host_map[host]
        path = parts.path or "/"
        if parts.query:
            path += "?" + parts.query
        started = time.time()
        try:
            conn = http.client.HTTPConnection(addr, port, timeout=self.timeout)
            conn.request("GET", path, headers={"Host": host, "User-Agent": "darkscope-fixture"})
            resp = conn.getresponse()
            body = resp.read()
            status = resp.status
            headers = {k.lower(): v for k, v in resp.getheaders()}
            conn.close()
        except OSError as exc:
            raise NavigationError(f"fetch failed for {url}: {exc}") from exc
        if status >= 400:
            raise NavigationError(f"HTTP {status} for {url}")
        return FetchResult(
            url=url,
            status=status,
            mime_type=headers.get("content-type", "text/html").split(";")[0],
            body=body,
            headers=headers,
            started_at=started,
            duration_ms=(time.time() - started) * 1000.0,
        )
