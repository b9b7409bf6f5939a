"""Content-addressed store integrity."""

from __future__ import annotations

import threading

import pytest

from darkscope.errors import StoreIntegrityError
from darkscope.store import SnapshotStore


class TestBlobs:
    def test_round_trip(self, store):
        ref = store.put_blob(b"hello world", "src")
        assert ref.startswith("src-")
        assert store.get_blob(ref) == b"hello world"
        assert store.has_blob(ref)

    def test_identical_content_same_ref(self, store):
        assert store.put_blob(b"x", "src") == store.put_blob(b"x", "src")

    def test_missing_blob_fails_loudly(self, store):
        with pytest.raises(StoreIntegrityError, match="missing"):
            store.get_blob("src-" + "0" * 64)

    def test_corrupt_blob_fails_loudly(self, store):
        ref = store.put_blob(b"payload payload payload", "har")
        kind, digest = store.parse_ref(ref)
        path = store._blob_path(kind, digest)
        path.write_bytes(b"tampered")
        with pytest.raises(StoreIntegrityError, match="corrupt"):
            store.get_blob(ref)

    def test_truncated_blob_fails_loudly(self, store):
        ref = store.put_blob(b"a" * 1000, "shot")
        kind, digest = store.parse_ref(ref)
        path = store._blob_path(kind, digest)
        path.write_bytes(path.read_bytes()[:100])
        with pytest.raises(StoreIntegrityError):
            store.get_blob(ref)

    def test_malformed_ref_rejected(self, store):
        assert not store.has_blob("nonsense")
        with pytest.raises(StoreIntegrityError):
            store.get_blob("weird-kind-abc")

    def test_unknown_kind_rejected(self, store):
        with pytest.raises(ValueError):
            store.put_blob(b"x", "movie")

    def test_concurrent_writers(self, store):
        refs = []
        lock = threading.Lock()

        def write(i):
            ref = store.put_blob(f"blob {i % 7}".encode(), "src")
            with lock:
                refs.append(ref)

        threads = [threading.Thread(target=write, args=(i,)) for i in range(40)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        for ref in refs:
            assert store.get_blob(ref)


class TestIndexes:
    def test_append_and_read(self, store):
        store.append_index("sessions", {"a": 1})
        store.append_index("sessions", {"b": 2})
        assert list(store.read_index("sessions")) == [{"a": 1}, {"b": 2}]

    def test_missing_index_is_empty(self, store):
        assert list(store.read_index("nothing")) == []
