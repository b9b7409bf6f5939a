"""Corpus-building orchestration: ingest -> categorize -> language filter."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from darkscope.corpus.classify import CategoryCache, CategoryClient, classify_sites
from darkscope.corpus.ingest import LineError, ingest_ranked_list
from darkscope.corpus.language import LanguageDetector, LanguageFilterReport, filter_language
from darkscope.corpus.records import Category, SiteRecord

log = logging.getLogger(__name__)


@dataclass
class CorpusBuildReport:
    ingested: int = 0
    line_errors: list[LineError] = field(default_factory=list)
    shopping: int = 0
    excluded_not_shopping: int = 0
    excluded_unknown_category: int = 0
    language: LanguageFilterReport = field(default_factory=LanguageFilterReport)


def write_corpus_file(records: list[SiteRecord], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [f"{r.domain}\t{r.rank}\t{r.category}\t{r.language}" for r in records]
    path.write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")


def read_corpus_file(path: str | Path) -> list[SiteRecord]:
    records = []
    for idx, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        if not line.strip():
            continue
        domain, rank, category, language = line.split("\t")
        records.append(SiteRecord(domain, int(rank), category, language, idx))
    return records


def build_corpus(
    list_path: str | Path,
    category_client: CategoryClient,
    homepage_text: Callable[[str], str],
    out_path: str | Path,
    detector: LanguageDetector | None = None,
    target_lang: str = "en",
    cache_path: str | Path | None = None,
    workers: int = 4,
) -> tuple[list[SiteRecord], CorpusBuildReport]:
    """Full corpus stage. Unknown-category sites are excluded (conservative:
    they would cost crawl budget downstream)."""
    report = CorpusBuildReport()
    records, report.line_errors = ingest_ranked_list(list_path)
    report.ingested = len(records)

    cache = CategoryCache(cache_path) if cache_path else None
    records = classify_sites(records, category_client, cache=cache, workers=workers)

    shopping = []
    for rec in records:
        if rec.category == Category.SHOPPING:
            shopping.append(rec)
        elif rec.category == Category.NOT_SHOPPING:
            report.excluded_not_shopping += 1
        else:
            report.excluded_unknown_category += 1
    report.shopping = len(shopping)

    kept, report.language = filter_language(shopping, homepage_text, detector, target=target_lang)
    write_corpus_file(kept, out_path)
    log.info(
        "corpus build: %d ingested, %d shopping, %d kept (%s)",
        report.ingested, report.shopping, len(kept), target_lang,
    )
    return kept, report
