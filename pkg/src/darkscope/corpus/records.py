"""Core corpus record types and classifier-evaluation metrics."""

from __future__ import annotations

import re
from dataclasses import dataclass, field

# RFC 1123-ish hostname: dot-separated labels, no leading/trailing hyphen.
_HOSTNAME_RE = re.compile(
    r"^(?=.{1,253}$)([a-z0-9]([a-z0-9-]{0,61}[a-z0-9])?\.)+[a-z][a-z0-9-]{0,61}[a-z0-9]$"
    r"|^[a-z0-9]([a-z0-9-]{0,61}[a-z0-9])?$",
    re.IGNORECASE,
)


class Category:
    SHOPPING = "shopping"
    NOT_SHOPPING = "not-shopping"
    UNKNOWN = "unknown"
    ALL = (SHOPPING, NOT_SHOPPING, UNKNOWN)


def is_valid_hostname(value: str) -> bool:
    return bool(_HOSTNAME_RE.match(value))


@dataclass
class SiteRecord:
    """One ranked, categorized, language-tagged candidate site."""

    domain: str
    rank: int
    category: str = Category.UNKNOWN
    language: str = "unknown"
    source_index: int = 0

    def __post_init__(self):
        if self.rank < 1:
            raise ValueError(f"rank must be >= 1, got {self.rank}")
        if not is_valid_hostname(self.domain):
            raise ValueError(f"not a valid hostname: {self.domain!r}")
        if self.category not in Category.ALL:
            raise ValueError(f"bad category: {self.category!r}")

    def with_category(self, category: str) -> "SiteRecord":
        # Only the unknown -> {shopping, not-shopping} transition is legal.
        if self.category != Category.UNKNOWN and category != self.category:
            raise ValueError(
                f"category of {self.domain} already fixed to {self.category!r}"
            )
        return SiteRecord(self.domain, self.rank, category, self.language, self.source_index)


class MetricsError(Exception):
    pass


@dataclass(frozen=True)
class ConfusionMatrix:
    tn: int
    fp: int
    fn: int
    tp: int

    def __post_init__(self):
        for name in ("tn", "fp", "fn", "tp"):
            if getattr(self, name) < 0:
                raise MetricsError(f"{name} must be non-negative")

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.fn + self.tp


def confusion_metrics(m: ConfusionMatrix) -> dict[str, float | None]:
    """Accuracy and the four standard rates.

    Zero denominators produce None (undefined) rather than raising; an
    all-zero matrix is an error.
    """
    if m.total == 0:
        raise MetricsError("all-zero confusion matrix")

    def ratio(num: int, den: int) -> float | None:
        return num / den if den else None

    return {
        "accuracy": (m.tp + m.tn) / m.total,
        "fpr": ratio(m.fp, m.fp + m.tn),
        "fnr": ratio(m.fn, m.fn + m.tp),
        "precision": ratio(m.tp, m.tp + m.fp),
        "recall": ratio(m.tp, m.tp + m.fn),
    }
