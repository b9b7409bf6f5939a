"""Ranked site-list ingestion.

Input is line-oriented: either `rank,domain` or a bare domain (position in
the file becomes the rank). Duplicate domains collapse to their best rank.
Malformed lines are recoverable per-line errors; an empty input is fatal.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from darkscope.corpus.records import SiteRecord, is_valid_hostname


class IngestError(Exception):
    pass


@dataclass(frozen=True)
class LineError:
    line_number: int
    line: str
    reason: str


def parse_line(line: str, position: int) -> SiteRecord:
    """Parse one list line. `position` is the 1-based line position used as
    the rank for bare-domain lines."""
    text = line.strip()
    if "," in text:
        rank_part, _, domain_part = text.partition(",")
        try:
            rank = int(rank_part.strip())
        except ValueError:
            raise IngestError(f"rank is not an integer: {rank_part.strip()!r}") from None
        if rank < 1:
            raise IngestError(f"rank must be >= 1: {rank}")
        domain = domain_part.strip().lower()
    else:
        rank = position
        domain = text.lower()
    if not is_valid_hostname(domain):
        raise IngestError(f"not a valid hostname: {domain!r}")
    return SiteRecord(domain=domain, rank=rank, source_index=position)


def ingest_ranked_list(source: str | Path | Iterable[str]) -> tuple[list[SiteRecord], list[LineError]]:
    """Read a ranked list into SiteRecords ordered by rank ascending.

    Returns (records, line_errors). Raises IngestError only when no line
    yields a record at all.
    """
    if isinstance(source, (str, Path)):
        lines = Path(source).read_text(encoding="utf-8").splitlines()
    else:
        lines = list(source)

    best: dict[str, SiteRecord] = {}
    errors: list[LineError] = []
    position = 0
    for lineno, raw in enumerate(lines, start=1):
        if not raw.strip():
            continue
        position += 1
        try:
            rec = parse_line(raw, position)
        except IngestError as exc:
            errors.append(LineError(lineno, raw.rstrip("\n"), str(exc)))
            continue
        prior = best.get(rec.domain)
        if prior is None or rec.rank < prior.rank:
            best[rec.domain] = rec
    if not best:
        raise IngestError("input produced no site records")
    records = sorted(best.values(), key=lambda r: (r.rank, r.domain))
    return records, errors
