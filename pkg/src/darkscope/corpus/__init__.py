from darkscope.corpus.records import (
    Category,
    ConfusionMatrix,
    MetricsError,
    SiteRecord,
    confusion_metrics,
)
from darkscope.corpus.ingest import IngestError, LineError, ingest_ranked_list, parse_line
from darkscope.corpus.classify import (
    CategoryCache,
    CategoryClient,
    FixtureCategoryClient,
    classify_sites,
)
from darkscope.corpus.language import (
    TrigramLanguageDetector,
    extract_visible_text,
    filter_language,
)
from darkscope.corpus.build import build_corpus, read_corpus_file, write_corpus_file

__all__ = [
    "Category",
    "ConfusionMatrix",
    "MetricsError",
    "SiteRecord",
    "confusion_metrics",
    "IngestError",
    "LineError",
    "ingest_ranked_list",
    "parse_line",
    "CategoryCache",
    "CategoryClient",
    "FixtureCategoryClient",
    "classify_sites",
    "TrigramLanguageDetector",
    "extract_visible_text",
    "filter_language",
    "build_corpus",
    "read_corpus_file",
    "write_corpus_file",
]
