"""Content-addressed snapshot store.

Blobs (page sources, screenshots, HTTP archives) live under
`blobs/<aa>/<sha256>.<ext>`, written temp-then-rename so concurrent writers
never expose partial files. Every read re-hashes and fails loudly on
mismatch. Stage indexes are append-only NDJSON files at the store root.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
import threading
from pathlib import Path
from typing import Iterator

from darkscope.errors import StoreIntegrityError

_EXTENSIONS = {"src": "html", "shot": "png", "har": "har.gz", "blob": "bin"}


class SnapshotStore:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        (self.root / "blobs").mkdir(parents=True, exist_ok=True)
        self._index_lock = threading.Lock()

    # -- blobs ----------------------------------------------------------------

    def _blob_path(self, kind: str, digest: str) -> Path:
        ext = _EXTENSIONS.get(kind, "bin")
        return self.root / "blobs" / digest[:2] / f"{digest}.{ext}"

    @staticmethod
    def parse_ref(ref: str) -> tuple[str, str]:
        kind, _, digest = ref.partition("-")
        if not digest or kind not in _EXTENSIONS:
            raise StoreIntegrityError(f"malformed blob ref: {ref!r}")
        return kind, digest

    def put_blob(self, data: bytes, kind: str = "blob") -> str:
        if kind not in _EXTENSIONS:
            raise ValueError(f"unknown blob kind: {kind!r}")
        digest = hashlib.sha256(data).hexdigest()
        path = self._blob_path(kind, digest)
        if not path.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, path)
            finally:
                if os.path.exists(tmp):
                    os.unlink(tmp)
        return f"{kind}-{digest}"

    def get_blob(self, ref: str) -> bytes:
        kind, digest = self.parse_ref(ref)
        path = self._blob_path(kind, digest)
        if not path.is_file():
            raise StoreIntegrityError(f"blob missing: {ref}")
        data = path.read_bytes()
        actual = hashlib.sha256(data).hexdigest()
        if actual != digest:
            raise StoreIntegrityError(f"blob corrupt: {ref} (hash {actual})")
        return data

    def has_blob(self, ref: str) -> bool:
        try:
            kind, digest = self.parse_ref(ref)
        except StoreIntegrityError:
            return False
        return self._blob_path(kind, digest).is_file()

    # -- stage indexes ----------------------------------------------------------

    def index_path(self, name: str) -> Path:
        return self.root / f"{name}.ndjson"

    def append_index(self, name: str, record: dict) -> None:
        with self._index_lock:
            with open(self.index_path(name), "a", encoding="utf-8") as fh:
                fh.write(json.dumps(record, sort_keys=True) + "\n")

    def read_index(self, name: str) -> Iterator[dict]:
        path = self.index_path(name)
        if not path.is_file():
            return
        for line in path.read_text(encoding="utf-8").splitlines():
            if line.strip():
                yield json.loads(line)

    def has_index(self, name: str) -> bool:
        return self.index_path(name).is_file()
