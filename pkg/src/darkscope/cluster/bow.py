"""Bag-of-words count matrix over a fixed vocabulary."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from darkscope.cluster.normalize import NormalizedSegment
from darkscope.cluster.vocabulary import Vocabulary, tokenize


@dataclass
class BowMatrix:
    counts: np.ndarray  # (n_segments, n_tokens) non-negative ints
    vocabulary: Vocabulary
    zero_rows: list[int] = field(default_factory=list)

    @property
    def shape(self) -> tuple[int, int]:
        return self.counts.shape  # type: ignore[return-value]


def vectorize(
    segments: Iterable[NormalizedSegment],
    vocabulary: Vocabulary,
    stopwords: frozenset[str] = frozenset(),
) -> BowMatrix:
    """Exact token counts; out-of-vocabulary tokens are ignored; all-zero
    rows are permitted and flagged."""
    if len(vocabulary) == 0:
        raise ValueError("vocabulary is empty")
    seg_list = list(segments)
    counts = np.zeros((len(seg_list), len(vocabulary)), dtype=np.int64)
    zero_rows = []
    for i, seg in enumerate(seg_list):
        for token in tokenize(seg.normalized_text, stopwords):
            j = vocabulary.index(token)
            if j is not None:
                counts[i, j] += 1
        if counts[i].sum() == 0:
            zero_rows.append(i)
    return BowMatrix(counts=counts, vocabulary=vocabulary, zero_rows=zero_rows)
