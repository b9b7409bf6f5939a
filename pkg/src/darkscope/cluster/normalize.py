"""Segment text normalization and exact-duplicate merging.

Lowercase, collapse whitespace, and replace every maximal digit run
(optionally containing decimal points or thousands commas) with a `<num>`
placeholder, then merge exact duplicates while keeping every source ref.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

NUM_TOKEN = "<num>"

# Maximal digit runs with optional grouping commas / decimal part.
_NUM_RE = re.compile(r"\d+(?:[.,]\d+)*")
_WS_RE = re.compile(r"\s+")


def normalize_text(text: str) -> str:
    text = text.lower()
    text = _NUM_RE.sub(NUM_TOKEN, text)
    return _WS_RE.sub(" ", text).strip()


@dataclass
class NormalizedSegment:
    normalized_text: str
    source_refs: list[tuple[str, str]] = field(default_factory=list)  # (site, snapshot/page ref)
    duplicate_count: int = 0


def normalize_and_dedupe(
    segments: Iterable[tuple[str, str, str]],
) -> list[NormalizedSegment]:
    """Merge exact duplicates of normalized text.

    Input items are (text, site, ref) triples; output order follows first
    appearance. Conservation: sum of duplicate_count equals the input count.
    """
    merged: dict[str, NormalizedSegment] = {}
    order: list[str] = []
    for text, site, ref in segments:
        normalized = normalize_text(text)
        if not normalized:
            normalized = ""
        entry = merged.get(normalized)
        if entry is None:
            entry = NormalizedSegment(normalized_text=normalized)
            merged[normalized] = entry
            order.append(normalized)
        entry.duplicate_count += 1
        entry.source_refs.append((site, ref))
    return [merged[k] for k in order]
