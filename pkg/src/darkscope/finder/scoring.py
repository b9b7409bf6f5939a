"""Weighted scoring of rendered elements against button pattern sets.

A regex hit is mandatory for a positive score; rendered area and background
saturation add secondary weight. The same scorer drives add-to-cart,
view-cart, and checkout detection with different pattern sets.
"""

from __future__ import annotations

import colorsys
import re
from dataclasses import dataclass
from typing import Sequence

ADD_TO_CART_PATTERNS = (r"add to (bag|cart|tote|basket)", r"buy now")
VIEW_CART_PATTERNS = (r"view (cart|bag|basket)", r"\bcart\b")
CHECKOUT_PATTERNS = (r"check ?out", r"place order", r"continue to payment")

# Weights on normalized components; regex is the gate.
REGEX_WEIGHT = 1.0
AREA_WEIGHT = 0.5
COLOR_WEIGHT = 0.2
AREA_NORM = 40_000.0  # px^2 at which the area component saturates

# A product page needs a regex hit on an element at least this large.
PRODUCT_PAGE_MIN_AREA = 600.0


@dataclass(frozen=True)
class ElementView:
    """What the scorer needs to know about one rendered element."""

    ref: str
    text: str
    x: float
    y: float
    width: float
    height: float
    background_color: tuple[int, int, int] = (255, 255, 255)
    visible: bool = True

    @property
    def area(self) -> float:
        return max(self.width, 0.0) * max(self.height, 0.0)


@dataclass(frozen=True)
class AddToCartScore:
    element_ref: str
    regex_hit: bool
    area_score: float
    color_score: float
    total: float
    area: float = 0.0


def _compile(patterns: Sequence[str]) -> list[re.Pattern]:
    return [re.compile(p, re.IGNORECASE) for p in patterns]


def saturation(rgb: tuple[int, int, int]) -> float:
    r, g, b = (c / 255.0 for c in rgb)
    _, _, s = colorsys.rgb_to_hsv(r, g, b)
    return s


def score_elements(
    elements: Sequence[ElementView],
    patterns: Sequence[str] = ADD_TO_CART_PATTERNS,
) -> list[AddToCartScore]:
    """Score every element; result sorted by total descending, stable by ref."""
    compiled = _compile(patterns)
    scores = []
    for el in elements:
        if not el.visible:
            scores.append(AddToCartScore(el.ref, False, 0.0, 0.0, 0.0, el.area))
            continue
        hit = any(p.search(el.text) for p in compiled)
        if not hit:
            scores.append(AddToCartScore(el.ref, False, 0.0, 0.0, 0.0, el.area))
            continue
        area_score = min(el.area / AREA_NORM, 1.0)
        color_score = saturation(el.background_color)
        total = REGEX_WEIGHT + AREA_WEIGHT * area_score + COLOR_WEIGHT * color_score
        scores.append(AddToCartScore(el.ref, True, area_score, color_score, total, el.area))
    scores.sort(key=lambda s: (-s.total, s.element_ref))
    return scores


def is_product_page_score(scores: Sequence[AddToCartScore]) -> bool:
    """Top score marks a product page iff it has a regex hit on an element
    rendered at PRODUCT_PAGE_MIN_AREA or larger."""
    if not scores:
        return False
    top = scores[0]
    return top.regex_hit and top.area >= PRODUCT_PAGE_MIN_AREA
