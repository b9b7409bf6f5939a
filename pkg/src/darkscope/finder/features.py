"""URL features for the product-page classifier."""

from __future__ import annotations

from dataclasses import dataclass
from urllib.parse import urlsplit

FEATURE_NAMES = (
    "url_length",
    "path_length",
    "path_slashes",
    "path_hyphens",
    "has_product_word",
    "has_category_word",
)


@dataclass(frozen=True)
class UrlFeatures:
    url_length: int
    path_length: int
    path_slashes: int
    path_hyphens: int
    has_product_word: bool
    has_category_word: bool

    def vector(self) -> list[float]:
        return [
            float(self.url_length),
            float(self.path_length),
            float(self.path_slashes),
            float(self.path_hyphens),
            1.0 if self.has_product_word else 0.0,
            1.0 if self.has_category_word else 0.0,
        ]


def extract_url_features(url: str) -> UrlFeatures:
    """Pure, deterministic feature extraction from an absolute URL.

    Word checks are case-insensitive substring tests on the path only.
    """
    parts = urlsplit(url)
    if not parts.scheme or not parts.netloc:
        raise ValueError(f"not an absolute URL: {url!r}")
    path = parts.path
    lowered = path.lower()
    return UrlFeatures(
        url_length=len(url),
        path_length=len(path),
        path_slashes=path.count("/"),
        path_hyphens=path.count("-"),
        has_product_word="product" in lowered,
        has_category_word="category" in lowered,
    )
