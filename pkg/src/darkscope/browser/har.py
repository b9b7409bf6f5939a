"""HTTP Archive (HAR) 1.2 construction and reading.

Entries keep full response bodies; archives are gzip-compressed on disk
because bodies dominate storage and downstream attribution needs them.
"""

from __future__ import annotations

import gzip
import json
from datetime import datetime, timezone
from pathlib import Path

from darkscope.browser.fetch import FetchResult


def _iso(ts: float) -> str:
    return datetime.fromtimestamp(ts, tz=timezone.utc).isoformat().replace("+00:00", "Z")


def entry_from_fetch(result: FetchResult) -> dict:
    return {
        "startedDateTime": _iso(result.started_at),
        "time": result.duration_ms,
        "request": {
            "method": "GET",
            "url": result.url,
            "httpVersion": "HTTP/1.1",
            "headers": [],
            "queryString": [],
            "cookies": [],
            "headersSize": -1,
            "bodySize": 0,
        },
        "response": {
            "status": result.status,
            "statusText": "OK" if result.status == 200 else "",
            "httpVersion": "HTTP/1.1",
            "headers": [{"name": k, "value": v} for k, v in result.headers.items()],
            "cookies": [],
            "content": {
                "size": len(result.body),
                "mimeType": result.mime_type,
                "text": result.body.decode("utf-8", errors="replace"),
            },
            "redirectURL": "",
            "headersSize": -1,
            "bodySize": len(result.body),
        },
        "cache": {},
        "timings": {"send": 0, "wait": result.duration_ms, "receive": 0},
    }


def har_document(entries: list[dict]) -> dict:
    return {
        "log": {
            "version": "1.2",
            "creator": {"name": "darkscope", "version": "0.1.0"},
            "entries": entries,
        }
    }


def har_bytes(entries: list[dict]) -> bytes:
    return gzip.compress(json.dumps(har_document(entries), sort_keys=True).encode("utf-8"))


def write_har(path: str | Path, entries: list[dict]) -> None:
    Path(path).write_bytes(har_bytes(entries))


def read_har(data_or_path: bytes | str | Path) -> dict:
    """Accepts gzip or plain JSON bytes, or a path to either."""
    if isinstance(data_or_path, (str, Path)):
        data = Path(data_or_path).read_bytes()
    else:
        data = data_or_path
    if data[:2] == b"\x1f\x8b":
        data = gzip.decompress(data)
    return json.loads(data.decode("utf-8"))


def iter_entries(har_doc: dict):
    yield from har_doc.get("log", {}).get("entries", [])


def entry_url(entry: dict) -> str:
    return entry.get("request", {}).get("url", "")


def entry_body(entry: dict) -> str:
    return entry.get("response", {}).get("content", {}).get("text", "")
