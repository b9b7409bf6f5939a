"""Append-only store for labeled dark-pattern instances.

Records are line-delimited JSON. Deletions are tombstones so that agreement
sessions remain replayable from the log.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field, asdict
from pathlib import Path
from typing import Callable, Iterable

from darkscope.taxonomy.registry import TaxonomyRegistry


class EvidenceError(Exception):
    """An instance referenced evidence that does not resolve."""


class DuplicateInstanceError(Exception):
    """The (site, type, segment ref) triple is already labeled."""


@dataclass
class PatternInstance:
    site: str
    pattern_type: str
    segment_refs: list[str]
    screenshot_refs: list[str] = field(default_factory=list)
    deceptive: bool = False
    labeler: str = ""
    labeled_at: float = 0.0
    note: str = ""
    instance_id: str = ""

    def key(self) -> tuple[str, str, str, str]:
        # Duplicate detection uses the first evidence segment. The labeler is
        # part of the key so two coders can label the same item in an
        # agreement session; one coder re-submitting is still a duplicate.
        return (self.labeler, self.site, self.pattern_type, self.segment_refs[0])


class InstanceStore:
    """Single-writer, append-only instance log with tombstone deletion.

    `resolver` answers whether an evidence ref exists (snapshot store lookup);
    pass `None` to skip resolution (offline statistics over an existing log).
    """

    def __init__(self, path: str | Path, taxonomy: TaxonomyRegistry,
                 resolver: Callable[[str], bool] | None = None):
        self.path = Path(path)
        self.taxonomy = taxonomy
        self.resolver = resolver
        self._lock = threading.Lock()
        self._instances: dict[str, PatternInstance] = {}
        self._keys: set[tuple[str, str, str]] = set()
        self._seq = 0
        if self.path.exists():
            self._replay()

    def _replay(self) -> None:
        for line in self.path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            rec = json.loads(line)
            if rec.get("tombstone"):
                inst = self._instances.pop(rec["instance_id"], None)
                if inst is not None:
                    self._keys.discard(inst.key())
                continue
            inst = PatternInstance(**{k: v for k, v in rec.items() if k != "tombstone"})
            self._instances[inst.instance_id] = inst
            self._keys.add(inst.key())
            self._seq = max(self._seq, int(inst.instance_id.split("-")[-1]))

    def _append(self, rec: dict) -> None:
        self.path.parent.mkdir(parents=True, exist_ok=True)
        with open(self.path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(rec, sort_keys=True) + "\n")

    def register(self, instance: PatternInstance) -> str:
        """Validate and append `instance`; returns the assigned id."""
        if instance.pattern_type not in self.taxonomy:
            raise EvidenceError(f"unknown pattern type: {instance.pattern_type!r}")
        if not instance.segment_refs:
            raise EvidenceError("instance carries no evidence segment refs")
        if self.resolver is not None:
            for ref in list(instance.segment_refs) + list(instance.screenshot_refs):
                if not self.resolver(ref):
                    raise EvidenceError(f"evidence ref does not resolve: {ref!r}")
        with self._lock:
            if instance.key() in self._keys:
                raise DuplicateInstanceError(
                    f"already labeled: site={instance.site!r} type={instance.pattern_type!r} "
                    f"segment={instance.segment_refs[0]!r}"
                )
            self._seq += 1
            instance.instance_id = f"inst-{self._seq:06d}"
            if not instance.labeled_at:
                instance.labeled_at = time.time()
            self._append(asdict(instance))
            self._instances[instance.instance_id] = instance
            self._keys.add(instance.key())
        return instance.instance_id

    def delete(self, instance_id: str) -> None:
        with self._lock:
            inst = self._instances.pop(instance_id, None)
            if inst is None:
                return
            self._keys.discard(inst.key())
            self._append({"tombstone": True, "instance_id": instance_id})

    def all(self) -> list[PatternInstance]:
        with self._lock:
            return list(self._instances.values())

    def __len__(self) -> int:
        return len(self._instances)

    def by_type(self) -> dict[str, list[PatternInstance]]:
        out: dict[str, list[PatternInstance]] = {}
        for inst in self.all():
            out.setdefault(inst.pattern_type, []).append(inst)
        return out

    def iter_sites(self) -> Iterable[str]:
        return {inst.site for inst in self.all()}
