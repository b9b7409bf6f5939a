from darkscope.finder.features import FEATURE_NAMES, UrlFeatures, extract_url_features
from darkscope.finder.logistic import LogisticModel, TrainingError
from darkscope.finder.training import load_labeled_urls, train_url_classifier
from darkscope.finder.scoring import (
    ADD_TO_CART_PATTERNS,
    CHECKOUT_PATTERNS,
    VIEW_CART_PATTERNS,
    AddToCartScore,
    ElementView,
    is_product_page_score,
    score_elements,
)
from darkscope.finder.discover import (
    DiscoveryBudget,
    DiscoveryTrace,
    discover_product_urls,
    rank_candidate_urls,
    registrable_domain,
)

__all__ = [
    "FEATURE_NAMES",
    "UrlFeatures",
    "extract_url_features",
    "LogisticModel",
    "TrainingError",
    "load_labeled_urls",
    "train_url_classifier",
    "ADD_TO_CART_PATTERNS",
    "CHECKOUT_PATTERNS",
    "VIEW_CART_PATTERNS",
    "AddToCartScore",
    "ElementView",
    "is_product_page_score",
    "score_elements",
    "DiscoveryBudget",
    "DiscoveryTrace",
    "discover_product_urls",
    "rank_candidate_urls",
    "registrable_domain",
]
