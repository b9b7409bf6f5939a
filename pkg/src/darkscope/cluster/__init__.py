from darkscope.cluster.normalize import NormalizedSegment, normalize_and_dedupe, normalize_text
from darkscope.cluster.vocabulary import (
    Vocabulary,
    VocabularyError,
    build_vocabulary,
    load_stopwords,
    tokenize,
)
from darkscope.cluster.bow import BowMatrix, vectorize
from darkscope.cluster.pca import PcaError, PcaModel, fit_pca
from darkscope.cluster.density import NOISE, ClusterAssignment, ClusterParams, hdbscan_cluster
from darkscope.cluster.summarize import ClusterSummary, summarize_clusters
from darkscope.cluster.run import ClusterRunResult, run_clustering

__all__ = [
    "NormalizedSegment",
    "normalize_and_dedupe",
    "normalize_text",
    "Vocabulary",
    "VocabularyError",
    "build_vocabulary",
    "load_stopwords",
    "tokenize",
    "BowMatrix",
    "vectorize",
    "PcaError",
    "PcaModel",
    "fit_pca",
    "NOISE",
    "ClusterAssignment",
    "ClusterParams",
    "hdbscan_cluster",
    "ClusterSummary",
    "summarize_clusters",
    "ClusterRunResult",
    "run_clustering",
]
