"""Add-to-cart element scoring."""

from __future__ import annotations

from darkscope.finder.scoring import (
    ADD_TO_CART_PATTERNS,
    CHECKOUT_PATTERNS,
    VIEW_CART_PATTERNS,
    ElementView,
    is_product_page_score,
    score_elements,
)


def _el(ref, text, w=200.0, h=50.0, color=(220, 40, 40), visible=True):
    return ElementView(ref=ref, text=text, x=0, y=0, width=w, height=h,
                       background_color=color, visible=visible)


class TestScoring:
    def test_add_to_cart_button_tops(self):
        scores = score_elements([
            _el("btn", "Add to Cart"),
            _el("link", "Contact us"),
        ])
        assert scores[0].element_ref == "btn"
        assert scores[0].regex_hit is True
        assert scores[0].total > 1.0
        assert scores[1].total == 0.0 and scores[1].regex_hit is False

    def test_no_regex_hit_means_zero(self):
        scores = score_elements([_el("a", "Contact us", w=500, h=500)])
        assert scores[0].total == 0.0

    def test_hidden_elements_score_zero(self):
        scores = score_elements([_el("h", "Add to cart", visible=False)])
        assert scores[0].total == 0.0
        assert scores[0].regex_hit is False

    def test_larger_area_ranks_first(self):
        scores = score_elements([
            _el("small", "add to bag", w=50, h=50),     # 2,500 px^2
            _el("large", "add to cart", w=100, h=100),  # 10,000 px^2
        ])
        assert [s.element_ref for s in scores[:2]] == ["large", "small"]

    def test_saturated_background_beats_gray(self):
        scores = score_elements([
            _el("gray", "add to cart", color=(128, 128, 128)),
            _el("red", "add to cart", color=(255, 0, 0)),
        ])
        assert scores[0].element_ref == "red"

    def test_pattern_variants(self):
        for text in ("ADD TO TOTE", "add to basket", "Buy Now"):
            assert score_elements([_el("x", text)])[0].regex_hit, text

    def test_view_cart_and_checkout_pattern_sets(self):
        assert score_elements([_el("v", "View cart")], VIEW_CART_PATTERNS)[0].regex_hit
        assert score_elements([_el("c", "Proceed to Checkout")], CHECKOUT_PATTERNS)[0].regex_hit
        assert score_elements([_el("c", "place order")], CHECKOUT_PATTERNS)[0].regex_hit
        assert not score_elements([_el("c", "keep shopping")], CHECKOUT_PATTERNS)[0].regex_hit


class TestProductPageRule:
    def test_requires_regex_and_area(self):
        big_hit = score_elements([_el("b", "Add to cart", w=40, h=20)])  # 800 px^2
        assert is_product_page_score(big_hit)
        tiny_hit = score_elements([_el("t", "Add to cart", w=20, h=20)])  # 400 px^2
        assert not is_product_page_score(tiny_hit)
        no_hit = score_elements([_el("n", "Our story", w=900, h=900)])
        assert not is_product_page_score(no_hit)
        assert not is_product_page_score([])
