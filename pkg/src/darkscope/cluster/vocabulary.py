"""Tokenization and document-frequency vocabulary construction."""

from __future__ import annotations

import re
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Iterable

from darkscope.cluster.normalize import NUM_TOKEN, NormalizedSegment

# Words, the number placeholder, or single currency symbols; everything else
# (punctuation) is a boundary.
_TOKEN_RE = re.compile(r"<num>|[$€£¥]|[a-z0-9]+(?:'[a-z]+)*")


class VocabularyError(Exception):
    pass


def load_stopwords(path: str | Path | None = None) -> frozenset[str]:
    if path is None:
        text = resources.files("darkscope.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    return frozenset(w.strip() for w in text.splitlines() if w.strip())


def tokenize(normalized_text: str, stopwords: frozenset[str] = frozenset()) -> list[str]:
    return [t for t in _TOKEN_RE.findall(normalized_text) if t not in stopwords]


@dataclass
class Vocabulary:
    tokens: tuple[str, ...]  # lexicographic order
    document_frequency: dict[str, int]
    min_df: int

    def __post_init__(self):
        self._index = {t: i for i, t in enumerate(self.tokens)}

    def index(self, token: str) -> int | None:
        return self._index.get(token)

    def __len__(self) -> int:
        return len(self.tokens)

    def __contains__(self, token: str) -> bool:
        return token in self._index

    def to_lines(self) -> str:
        return "\n".join(f"{t}\t{self.document_frequency[t]}" for t in self.tokens) + "\n"

    @classmethod
    def from_lines(cls, text: str, min_df: int) -> "Vocabulary":
        df = {}
        for line in text.splitlines():
            if line.strip():
                token, _, count = line.partition("\t")
                df[token] = int(count)
        return cls(tuple(sorted(df)), df, min_df)


def build_vocabulary(
    segments: Iterable[NormalizedSegment],
    min_df: int = 100,
    stopwords: frozenset[str] | None = None,
) -> Vocabulary:
    """Tokens appearing in at least `min_df` segments, lexicographic order.

    `NUM_TOKEN` and currency symbols count like any token; stop words never
    enter the vocabulary.
    """
    if min_df < 1:
        raise VocabularyError("min_df must be >= 1")
    if stopwords is None:
        stopwords = load_stopwords()
    df: dict[str, int] = {}
    for seg in segments:
        for token in set(tokenize(seg.normalized_text, stopwords)):
            df[token] = df.get(token, 0) + 1
    kept = {t: c for t, c in df.items() if c >= min_df}
    if not kept:
        raise VocabularyError(
            f"vocabulary is empty at min_df={min_df}; lower min_df "
            f"(highest observed df was {max(df.values()) if df else 0})"
        )
    assert NUM_TOKEN not in stopwords
    return Vocabulary(tuple(sorted(kept)), kept, min_df)
