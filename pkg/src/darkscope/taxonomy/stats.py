"""Agreement and prevalence statistics.

Cohen's kappa and Spearman rank correlation are computed from first
principles; only the Student-t survival function for the Spearman p-value
comes from scipy.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from typing import Hashable, Sequence

from scipy.special import stdtr


class StatsError(Exception):
    pass


@dataclass(frozen=True)
class AgreementRecord:
    """Two coders' labels over the same item set."""

    items: tuple
    coder_a: tuple
    coder_b: tuple

    def __post_init__(self):
        if len(self.coder_a) != len(self.coder_b):
            raise StatsError(
                f"label vectors differ in length: {len(self.coder_a)} vs {len(self.coder_b)}"
            )
        if self.items and len(self.items) != len(self.coder_a):
            raise StatsError("item set and label vectors differ in length")


def cohens_kappa(record: AgreementRecord) -> float:
    """kappa = (Po - Pe) / (1 - Pe), chance agreement from the coders' marginals.

    Degenerate case: Pe == 1 happens only when both coders each used a single
    label for every item. If they also agree everywhere (Po == 1) kappa is
    defined as 1.0; a disagreement with Pe == 1 is impossible, but guarded.
    """
    a, b = record.coder_a, record.coder_b
    n = len(a)
    if n < 1:
        raise StatsError("kappa needs at least one item")
    po = sum(1 for x, y in zip(a, b) if x == y) / n
    counts_a = Counter(a)
    counts_b = Counter(b)
    pe = sum(counts_a[label] * counts_b.get(label, 0) for label in counts_a) / (n * n)
    if pe == 1.0:
        if po == 1.0:
            return 1.0
        raise StatsError("chance agreement is 1 but observed agreement is not")
    return (po - pe) / (1.0 - pe)


def rank_with_ties(values: Sequence[float]) -> list[float]:
    """1-based ranks; tied values share the average of their positions."""
    order = sorted(range(len(values)), key=lambda i: values[i])
    ranks = [0.0] * len(values)
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and values[order[j + 1]] == values[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman_rank(x: Sequence[float], y: Sequence[float]) -> tuple[float, float]:
    """Spearman's rho with average ranks for ties.

    The p-value uses the t approximation: t = rho * sqrt((n-2) / (1-rho^2)),
    two-sided against Student's t with n-2 degrees of freedom. |rho| == 1
    yields p == 0.0.
    """
    if len(x) != len(y):
        raise StatsError("series differ in length")
    n = len(x)
    if n < 3:
        raise StatsError("spearman needs at least 3 points")
    if len(set(x)) == 1 or len(set(y)) == 1:
        raise StatsError("constant series has undefined ranks")
    rx = rank_with_ties(x)
    ry = rank_with_ties(y)
    mx = sum(rx) / n
    my = sum(ry) / n
    cov = sum((a - mx) * (b - my) for a, b in zip(rx, ry))
    vx = sum((a - mx) ** 2 for a in rx)
    vy = sum((b - my) ** 2 for b in ry)
    rho = cov / math.sqrt(vx * vy)
    rho = max(-1.0, min(1.0, rho))
    if abs(rho) == 1.0:
        return rho, 0.0
    t = rho * math.sqrt((n - 2) / (1.0 - rho * rho))
    p = 2.0 * float(stdtr(n - 2, -abs(t)))
    return rho, p


@dataclass
class PrevalenceReport:
    total_instances: int
    total_sites_labeled: int
    corpus_size: int
    overall_site_fraction: float
    per_type_instances: dict[str, int]
    per_type_sites: dict[str, int]
    rank_bins: list[dict] = field(default_factory=list)  # bin_index, rank_lo, rank_hi, sites, labeled, prevalence
    spearman_rho: float | None = None
    spearman_p: float | None = None

    def to_dict(self) -> dict:
        return {
            "total_instances": self.total_instances,
            "total_sites_labeled": self.total_sites_labeled,
            "corpus_size": self.corpus_size,
            "overall_site_fraction": self.overall_site_fraction,
            "per_type_instances": dict(sorted(self.per_type_instances.items())),
            "per_type_sites": dict(sorted(self.per_type_sites.items())),
            "rank_bins": self.rank_bins,
            "spearman_rho": self.spearman_rho,
            "spearman_p": self.spearman_p,
        }


def prevalence_report(
    instances: Sequence,
    corpus: Sequence[tuple[str, int]],
    bin_width: int = 1000,
) -> PrevalenceReport:
    """Summarize labeled instances against the corpus.

    `instances` carry .site and .pattern_type; `corpus` is (domain, rank)
    pairs. The rank-bin series feeds the popularity-vs-prevalence correlation;
    with fewer than 3 non-degenerate bins the correlation is left undefined
    rather than raised.
    """
    if not corpus:
        raise StatsError("corpus must be non-empty")
    per_type_instances: dict[str, int] = {}
    type_sites: dict[str, set[str]] = {}
    labeled_sites: set[str] = set()
    for inst in instances:
        per_type_instances[inst.pattern_type] = per_type_instances.get(inst.pattern_type, 0) + 1
        type_sites.setdefault(inst.pattern_type, set()).add(inst.site)
        labeled_sites.add(inst.site)

    rank_by_domain = dict(corpus)
    bins: dict[int, dict] = {}
    for domain, rank in corpus:
        idx = (rank - 1) // bin_width
        b = bins.setdefault(idx, {"bin_index": idx, "rank_lo": idx * bin_width + 1,
                                  "rank_hi": (idx + 1) * bin_width, "sites": 0, "labeled": 0})
        b["sites"] += 1
        if domain in labeled_sites:
            b["labeled"] += 1
    series = [bins[i] for i in sorted(bins)]
    for b in series:
        b["prevalence"] = b["labeled"] / b["sites"]

    rho = p = None
    xs = [float(b["bin_index"]) for b in series]
    ys = [b["prevalence"] for b in series]
    if len(series) >= 3 and len(set(ys)) > 1:
        rho, p = spearman_rank(xs, ys)

    labeled_in_corpus = labeled_sites & set(rank_by_domain)
    return PrevalenceReport(
        total_instances=len(instances),
        total_sites_labeled=len(labeled_sites),
        corpus_size=len(corpus),
        overall_site_fraction=len(labeled_in_corpus) / len(corpus),
        per_type_instances=per_type_instances,
        per_type_sites={t: len(s) for t, s in type_sites.items()},
        rank_bins=series,
        spearman_rho=rho,
        spearman_p=p,
    )
