"""Site category classification behind a pluggable client.

The commercial classifier is abstracted as a CategoryClient; the bundled
FixtureCategoryClient answers from a static mapping so everything runs
offline. Client answers are cached on disk (append-only, domain-keyed) so
interrupted runs resume without repeat calls.
"""

from __future__ import annotations

import json
import logging
import threading
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Protocol

from darkscope.corpus.records import Category, SiteRecord

log = logging.getLogger(__name__)


class CategoryClient(Protocol):
    def categorize(self, domain: str) -> str:
        """Return 'shopping' or 'not-shopping'; may raise on failure."""
        ...


class FixtureCategoryClient:
    """Offline client backed by a {domain: category} mapping.

    Unlisted domains fall back to `default`; domains in `failing` raise to
    exercise degradation paths. A call counter backs the cache contract tests.
    """

    def __init__(self, mapping: dict[str, str], default: str = Category.NOT_SHOPPING,
                 failing: set[str] | None = None):
        self.mapping = {k.lower(): v for k, v in mapping.items()}
        self.default = default
        self.failing = {d.lower() for d in (failing or set())}
        self.calls = 0

    @classmethod
    def from_dir(cls, fixture_dir: str | Path) -> "FixtureCategoryClient":
        path = Path(fixture_dir) / "categories.json"
        return cls(json.loads(path.read_text(encoding="utf-8")))

    def categorize(self, domain: str) -> str:
        self.calls += 1
        domain = domain.lower()
        if domain in self.failing:
            raise ConnectionError(f"fixture client failure for {domain}")
        return self.mapping.get(domain, self.default)


class CategoryCache:
    """Append-only, domain-keyed cache file: one `domain<TAB>category` per line.

    Appends are serialized; a crash mid-run leaves earlier lines valid.
    """

    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._lock = threading.Lock()
        self._entries: dict[str, str] = {}
        if self.path.exists():
            for line in self.path.read_text(encoding="utf-8").splitlines():
                if "\t" in line:
                    domain, category = line.split("\t", 1)
                    self._entries[domain] = category

    def get(self, domain: str) -> str | None:
        return self._entries.get(domain)

    def put(self, domain: str, category: str) -> None:
        with self._lock:
            if domain in self._entries:
                return
            self._entries[domain] = category
            self.path.parent.mkdir(parents=True, exist_ok=True)
            with open(self.path, "a", encoding="utf-8") as fh:
                fh.write(f"{domain}\t{category}\n")


def classify_sites(
    records: list[SiteRecord],
    client: CategoryClient,
    cache: CategoryCache | None = None,
    workers: int = 4,
) -> list[SiteRecord]:
    """Fill every record's category via cache-then-client.

    Client failures leave the record unknown and never abort the batch.
    Output keeps rank order regardless of worker completion order.
    """

    def resolve(rec: SiteRecord) -> SiteRecord:
        if rec.category != Category.UNKNOWN:
            return rec
        if cache is not None:
            hit = cache.get(rec.domain)
            if hit is not None:
                return rec.with_category(hit)
        try:
            category = client.categorize(rec.domain)
        except Exception as exc:
            log.warning("category client failed for %s: %s", rec.domain, exc)
            return rec
        if category not in (Category.SHOPPING, Category.NOT_SHOPPING):
            log.warning("category client returned %r for %s; kept unknown", category, rec.domain)
            return rec
        if cache is not None:
            cache.put(rec.domain, category)
        return rec.with_category(category)

    if workers <= 1:
        return [resolve(r) for r in records]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(resolve, records))
