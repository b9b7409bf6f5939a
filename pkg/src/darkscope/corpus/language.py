"""Language filtering with a bundled character-trigram detector.

The detector follows the classic rank-order profile method: a language
profile is its most frequent character trigrams in rank order, and a text is
scored by the out-of-place distance between its own trigram ranks and each
profile. It is deliberately small and pluggable; any object with
`detect(text) -> (language, confidence)` can replace it.
"""

from __future__ import annotations

import json
import logging
import re
from collections import Counter
from dataclasses import dataclass, field
from html.parser import HTMLParser
from importlib import resources
from typing import Callable, Protocol

from darkscope.corpus.records import SiteRecord

log = logging.getLogger(__name__)

MIN_TEXT_CHARS = 40
HOMEPAGE_TEXT_CAP = 20_000
PROFILE_SIZE = 400

_NONWORD_RE = re.compile(r"[^a-zA-ZÀ-ÿ' ]+")
_WS_RE = re.compile(r"\s+")


class LanguageDetector(Protocol):
    def detect(self, text: str) -> tuple[str, float]: ...


def text_trigrams(text: str) -> Counter:
    """Trigram counts over the normalized text (padded per word)."""
    cleaned = _WS_RE.sub(" ", _NONWORD_RE.sub(" ", text.lower())).strip()
    grams: Counter = Counter()
    for word in cleaned.split(" "):
        if not word:
            continue
        padded = f" {word} "
        for i in range(len(padded) - 2):
            grams[padded[i : i + 3]] += 1
    return grams


def build_profile(text: str, size: int = PROFILE_SIZE) -> list[str]:
    grams = text_trigrams(text)
    ordered = sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))
    return [g for g, _ in ordered[:size]]


class TrigramLanguageDetector:
    """Rank-order trigram detector over a fixed profile set."""

    def __init__(self, profiles: dict[str, list[str]] | None = None):
        if profiles is None:
            raw = resources.files("darkscope.data").joinpath("lang_profiles.json").read_bytes()
            profiles = json.loads(raw)
        self.profiles = profiles
        self._ranks = {
            lang: {g: i for i, g in enumerate(profile)} for lang, profile in profiles.items()
        }

    def detect(self, text: str) -> tuple[str, float]:
        if len(text.strip()) < MIN_TEXT_CHARS:
            return "unknown", 0.0
        grams = text_trigrams(text)
        if not grams:
            return "unknown", 0.0
        doc_ranked = [g for g, _ in sorted(grams.items(), key=lambda kv: (-kv[1], kv[0]))][:PROFILE_SIZE]
        best_lang, best_dist = "unknown", None
        max_penalty = PROFILE_SIZE
        worst = len(doc_ranked) * max_penalty
        for lang, ranks in self._ranks.items():
            dist = 0
            for i, gram in enumerate(doc_ranked):
                j = ranks.get(gram)
                dist += abs(i - j) if j is not None else max_penalty
            if best_dist is None or dist < best_dist:
                best_lang, best_dist = lang, dist
        confidence = 1.0 - (best_dist / worst) if worst else 0.0
        return best_lang, confidence


class _VisibleTextParser(HTMLParser):
    _SKIP = {"script", "style", "noscript", "template"}

    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.chunks: list[str] = []
        self._skip_depth = 0

    def handle_starttag(self, tag, attrs):
        if tag in self._SKIP:
            self._skip_depth += 1

    def handle_endtag(self, tag):
        if tag in self._SKIP and self._skip_depth:
            self._skip_depth -= 1

    def handle_data(self, data):
        if not self._skip_depth and data.strip():
            self.chunks.append(data.strip())


def extract_visible_text(html: str, cap: int = HOMEPAGE_TEXT_CAP) -> str:
    """Concatenated visible text nodes, scripts/styles removed, capped."""
    parser = _VisibleTextParser()
    parser.feed(html)
    return " ".join(parser.chunks)[:cap]


@dataclass
class LanguageFilterReport:
    kept: int = 0
    wrong_language: int = 0
    unknown_language: int = 0
    fetch_failures: list[str] = field(default_factory=list)


def filter_language(
    records: list[SiteRecord],
    homepage_text: Callable[[str], str],
    detector: LanguageDetector | None = None,
    target: str = "en",
) -> tuple[list[SiteRecord], LanguageFilterReport]:
    """Tag each record's language and keep only the target language.

    `homepage_text(domain)` returns extracted visible homepage text and may
    raise; failures exclude the record and land in the skip report.
    """
    detector = detector or TrigramLanguageDetector()
    report = LanguageFilterReport()
    kept: list[SiteRecord] = []
    for rec in records:
        try:
            text = homepage_text(rec.domain)
        except Exception as exc:
            log.warning("homepage fetch failed for %s: %s", rec.domain, exc)
            report.fetch_failures.append(rec.domain)
            continue
        language, _conf = detector.detect(text)
        rec = SiteRecord(rec.domain, rec.rank, rec.category, language, rec.source_index)
        if language == target:
            kept.append(rec)
            report.kept += 1
        elif language == "unknown":
            report.unknown_language += 1
        else:
            report.wrong_language += 1
    return kept, report
