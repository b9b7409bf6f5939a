from darkscope.fixtures.shopserver import FixtureShopServer
from darkscope.fixtures.sites import (
    DECEPTION_HOST,
    FIVE_SITE_MANIFEST,
    build_deception_pages,
    build_five_site_corpus,
    build_outcome_corpus,
)

__all__ = [
    "FixtureShopServer",
    "DECEPTION_HOST",
    "FIVE_SITE_MANIFEST",
    "build_deception_pages",
    "build_five_site_corpus",
    "build_outcome_corpus",
]
