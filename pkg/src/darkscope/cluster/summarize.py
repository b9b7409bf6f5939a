"""Cluster summaries for analyst triage."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from darkscope.cluster.density import NOISE, ClusterAssignment
from darkscope.cluster.normalize import NormalizedSegment
from darkscope.cluster.vocabulary import Vocabulary, tokenize

TOP_TOKENS = 10
REPRESENTATIVES = 5


@dataclass
class ClusterSummary:
    cluster_id: int  # NOISE for the noise group
    size: int
    top_tokens: list[tuple[str, int]]
    representative_texts: list[str]
    sites: list[str]
    member_indices: list[int] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "cluster_id": self.cluster_id,
            "size": self.size,
            "top_tokens": [[t, c] for t, c in self.top_tokens],
            "representative_texts": self.representative_texts,
            "sites": self.sites,
            "member_indices": self.member_indices,
        }


def _summary_for(
    cluster_id: int,
    members: list[int],
    segments: list[NormalizedSegment],
    vocabulary: Vocabulary,
    projected: np.ndarray | None,
) -> ClusterSummary:
    token_counts: Counter = Counter()
    sites: set[str] = set()
    for idx in members:
        seg = segments[idx]
        for token in tokenize(seg.normalized_text):
            if token in vocabulary:
                token_counts[token] += 1
        sites.update(site for site, _ in seg.source_refs)

    if projected is not None and cluster_id != NOISE and members:
        pts = projected[members]
        centroid = pts.mean(axis=0)
        dist = np.linalg.norm(pts - centroid, axis=1)
        order = np.argsort(dist, kind="stable")[:REPRESENTATIVES]
        reps = [segments[members[int(i)]].normalized_text for i in order]
    else:
        reps = [segments[i].normalized_text for i in members[:REPRESENTATIVES]]

    top = sorted(token_counts.items(), key=lambda kv: (-kv[1], kv[0]))[:TOP_TOKENS]
    return ClusterSummary(
        cluster_id=cluster_id,
        size=len(members),
        top_tokens=top,
        representative_texts=reps,
        sites=sorted(sites),
        member_indices=list(members),
    )


def summarize_clusters(
    assignment: ClusterAssignment,
    segments: list[NormalizedSegment],
    vocabulary: Vocabulary,
    projected: np.ndarray | None = None,
) -> list[ClusterSummary]:
    """One summary per cluster plus a trailing noise-group summary.

    The noise group carries cluster_id NOISE and never counts as a cluster.
    """
    if len(assignment.labels) != len(segments):
        raise ValueError("assignment and segment list are inconsistent")
    summaries = [
        _summary_for(cid, members, segments, vocabulary, projected)
        for cid, members in sorted(assignment.cluster_points.items())
    ]
    noise_members = [i for i, label in enumerate(assignment.labels) if label == NOISE]
    if noise_members:
        summaries.append(_summary_for(NOISE, noise_members, segments, vocabulary, projected))
    return summaries
