"""Clustering stage orchestration: segments in, assignment files out."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from darkscope.cluster.bow import vectorize
from darkscope.cluster.density import NOISE, ClusterAssignment, ClusterParams, hdbscan_cluster
from darkscope.cluster.normalize import NormalizedSegment, normalize_and_dedupe
from darkscope.cluster.pca import fit_pca
from darkscope.cluster.summarize import ClusterSummary, summarize_clusters
from darkscope.cluster.vocabulary import Vocabulary, build_vocabulary, load_stopwords
from darkscope.segmenter import Segment


@dataclass
class ClusterRunResult:
    normalized: list[NormalizedSegment]
    vocabulary: Vocabulary
    assignment: ClusterAssignment
    summaries: list[ClusterSummary]
    retained_components: int

    def write(self, out_dir: str | Path) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "vocabulary.tsv").write_text(self.vocabulary.to_lines(), encoding="utf-8")
        with open(out / "assignments.tsv", "w", encoding="utf-8") as fh:
            for seg, label in zip(self.normalized, self.assignment.labels):
                ref = ";".join(f"{site}|{r}" for site, r in seg.source_refs[:3])
                label_txt = "NOISE" if label == NOISE else str(int(label))
                fh.write(f"{seg.normalized_text}\t{label_txt}\t{seg.duplicate_count}\t{ref}\n")
        with open(out / "clusters.json", "w", encoding="utf-8") as fh:
            json.dump(
                {
                    "n_clusters": self.assignment.n_clusters,
                    "retained_components": self.retained_components,
                    "min_cluster_size": self.assignment.params.min_cluster_size,
                    "metric": self.assignment.params.metric,
                    "summaries": [s.to_dict() for s in self.summaries],
                },
                fh,
                indent=2,
                sort_keys=True,
            )
            fh.write("\n")


def run_clustering(
    segments: list[Segment],
    min_df: int = 100,
    params: ClusterParams | None = None,
    variance_target: float = 0.95,
    fixed_k: int | None = None,
) -> ClusterRunResult:
    """The full triage pipeline: normalize, vectorize, reduce, cluster."""
    params = params or ClusterParams()
    stopwords = load_stopwords()
    triples = [(s.inner_text, s.page_url, f"{s.origin}@{s.captured_at}") for s in segments]
    normalized = normalize_and_dedupe(triples)
    vocabulary = build_vocabulary(normalized, min_df=min_df, stopwords=stopwords)
    bow = vectorize(normalized, vocabulary, stopwords=stopwords)
    model, projected = fit_pca(bow.counts, variance_target=variance_target, fixed_k=fixed_k)
    assignment = hdbscan_cluster(projected, params)
    summaries = summarize_clusters(assignment, normalized, vocabulary, projected)
    return ClusterRunResult(
        normalized=normalized,
        vocabulary=vocabulary,
        assignment=assignment,
        summaries=summaries,
        retained_components=model.retained_k,
    )


def dedup_conservation_holds(normalized: list[NormalizedSegment], input_count: int) -> bool:
    return sum(s.duplicate_count for s in normalized) == input_count


def partition_from_labels(labels: np.ndarray) -> tuple:
    groups: dict[int, list[int]] = {}
    for i, label in enumerate(labels):
        if label != NOISE:
            groups.setdefault(int(label), []).append(i)
    return tuple(sorted(tuple(v) for v in groups.values()))
