from darkscope.taxonomy.registry import (
    CHARACTERISTIC_DIMENSIONS,
    PatternType,
    TaxonomyError,
    TaxonomyRegistry,
    load_taxonomy,
)
from darkscope.taxonomy.instances import (
    DuplicateInstanceError,
    EvidenceError,
    InstanceStore,
    PatternInstance,
)
from darkscope.taxonomy.stats import (
    AgreementRecord,
    PrevalenceReport,
    StatsError,
    cohens_kappa,
    prevalence_report,
    spearman_rank,
)

__all__ = [
    "CHARACTERISTIC_DIMENSIONS",
    "PatternType",
    "TaxonomyError",
    "TaxonomyRegistry",
    "load_taxonomy",
    "DuplicateInstanceError",
    "EvidenceError",
    "InstanceStore",
    "PatternInstance",
    "AgreementRecord",
    "PrevalenceReport",
    "StatsError",
    "cohens_kappa",
    "prevalence_report",
    "spearman_rank",
]
