"""Checkout-flow simulation and snapshot capture.

The walnut-lamp walkthrough (load, option select, add, view cart, checkout)
was traced by hand to fix the expected snapshot count at exactly 5.
"""

from __future__ import annotations

import pytest

from darkscope.browser.fetch import HttpFetcher, MappingFetcher
from darkscope.browser.har import read_har
from darkscope.browser.session import FixtureBrowser
from darkscope.checkout.capture import capture_snapshot
from darkscope.checkout.flow import (
    CrawlSession,
    InteractionStep,
    Outcome,
    classify_outcome,
    run_checkout_flow,
)
from darkscope.errors import PreconditionError
from darkscope.fixtures.sites import build_outcome_corpus


def _browser_for(shop_server):
    return FixtureBrowser(HttpFetcher(shop_server.host_map()))


class TestClassifyOutcome:
    def _session(self, steps):
        return CrawlSession(site="s", product_url="u",
                            steps=[InteractionStep(k, "e", ok) for k, ok in steps])

    def test_full_chain(self):
        s = self._session([("add_to_cart", True), ("view_cart", True), ("checkout", True)])
        assert classify_outcome(s) == Outcome.REACHED_CHECKOUT

    def test_add_then_view_failure(self):
        s = self._session([("add_to_cart", True), ("view_cart", False)])
        assert classify_outcome(s) == Outcome.ADDED_TO_CART_ONLY

    def test_empty_steps(self):
        assert classify_outcome(self._session([])) == Outcome.FAILED

    def test_total_over_all_step_combinations(self):
        kinds = ["dismiss_popup", "select_option", "add_to_cart", "view_cart", "checkout"]
        import itertools
        for bits in itertools.product([True, False], repeat=5):
            s = self._session(list(zip(kinds, bits)))
            assert classify_outcome(s) in (Outcome.REACHED_CHECKOUT,
                                           Outcome.ADDED_TO_CART_ONLY, Outcome.FAILED)


class TestFlow:
    def test_dropdown_shop_reaches_checkout_with_five_snapshots(self, shop_server, store):
        browser = _browser_for(shop_server)
        session = run_checkout_flow(
            "http://alpha.shop-fixture.test/product/walnut-lamp.html", browser, store,
            site="alpha.shop-fixture.test")
        assert session.outcome == Outcome.REACHED_CHECKOUT
        assert len(session.snapshot_ids) == 5  # load, option, add, view, checkout
        kinds = [(s.kind, s.succeeded) for s in session.steps]
        assert ("select_option", True) in kinds
        order = [s.kind for s in session.steps if s.kind in ("add_to_cart", "view_cart", "checkout")]
        assert order == ["add_to_cart", "view_cart", "checkout"]

    def test_broken_view_cart_is_added_only(self, shop_server, store):
        browser = _browser_for(shop_server)
        session = run_checkout_flow(
            "http://outcome-15.fixture.test/product/item-15.html", browser, store,
            site="outcome-15.fixture.test")
        assert session.outcome == Outcome.ADDED_TO_CART_ONLY
        failed = [s for s in session.steps if not s.succeeded]
        assert any(s.kind == "view_cart" for s in failed)

    def test_dead_product_url_fails_with_no_steps(self, store):
        browser = FixtureBrowser(MappingFetcher({}))
        session = run_checkout_flow("https://dead.example/p", browser, store)
        assert session.outcome == Outcome.FAILED
        assert session.steps == []
        assert "navigation" in session.failure_reason

    def test_unfillable_required_input_blocks_add(self, store):
        page = """<html><body style="width:1000px">
        <div>Rug</div>
        <div><input id="dim" type="text"></div>
        <button data-requires="#dim" style="width:200px;height:50px">Add to cart</button>
        </body></html>"""
        browser = FixtureBrowser(MappingFetcher({"https://rug.example/p.html": page}))
        session = run_checkout_flow("https://rug.example/p.html", browser, store)
        assert session.outcome == Outcome.FAILED
        add_steps = [s for s in session.steps if s.kind == "add_to_cart"]
        assert add_steps and not add_steps[0].succeeded

    def test_snapshot_timestamps_strictly_increase(self, shop_server, store):
        browser = _browser_for(shop_server)
        run_checkout_flow("http://beta.shop-fixture.test/product/wool-scarf.html",
                          browser, store, site="beta.shop-fixture.test")
        times = [row["captured_at"] for row in store.read_index("snapshots")]
        assert all(b > a for a, b in zip(times, times[1:]))

    def test_outcome_distribution_on_20_site_corpus(self, shop_server, store):
        _, expected = build_outcome_corpus()
        outcomes = {"reached_checkout": 0, "added_to_cart_only": 0, "failed": 0}
        for product_url, _kind in sorted(expected.items()):
            browser = _browser_for(shop_server)
            session = run_checkout_flow(product_url, browser, store)
            outcomes[session.outcome] += 1
            assert session.outcome == expected[product_url], product_url
        assert outcomes == {"reached_checkout": 14, "added_to_cart_only": 3, "failed": 3}

    def test_store_refs_all_resolve(self, shop_server, store):
        browser = _browser_for(shop_server)
        run_checkout_flow("http://gamma.shop-fixture.test/product/trail-boots.html",
                          browser, store, site="gamma.shop-fixture.test")
        for row in store.read_index("snapshots"):
            assert store.get_blob(row["source_ref"])
            assert store.get_blob(row["har_ref"])
            if row["screenshot_ref"]:
                assert store.get_blob(row["screenshot_ref"])


class TestCapture:
    def test_requires_settled_page(self, shop_server, store):
        browser = _browser_for(shop_server)
        browser.goto("http://epsilon.shop-fixture.test/")
        with pytest.raises(PreconditionError):
            capture_snapshot(browser, "load", store, "s1")

    def test_unchanged_page_same_source_distinct_ids(self, store):
        page = "<html><body><div>static fixture</div></body></html>"
        browser = FixtureBrowser(MappingFetcher({"https://x.example/": page}))
        browser.goto("https://x.example/")
        browser.wait_for_load_settled()
        snap1 = capture_snapshot(browser, "load", store, "s1")
        browser.clock.sleep(0.5)
        snap2 = capture_snapshot(browser, "load", store, "s1")
        assert snap1.source_ref == snap2.source_ref  # identical markup
        assert snap1.snapshot_id != snap2.snapshot_id  # timestamp in the id

    def test_bad_trigger_rejected(self, shop_server, store):
        browser = _browser_for(shop_server)
        browser.goto("http://epsilon.shop-fixture.test/")
        browser.wait_for_load_settled()
        with pytest.raises(ValueError):
            capture_snapshot(browser, "hover", store, "s1")

    def test_har_blob_lists_page_requests(self, shop_server, store):
        browser = _browser_for(shop_server)
        browser.goto("http://beta.shop-fixture.test/product/wool-scarf.html")
        browser.wait_for_load_settled()
        snap = capture_snapshot(browser, "load", store, "s1")
        doc = read_har(store.get_blob(snap.har_ref))
        assert len(doc["log"]["entries"]) == 2  # document + fomo script

    def test_screenshot_failure_degrades_with_warning(self, shop_server, store, monkeypatch):
        import darkscope.checkout.capture as capture_mod

        def boom(page):
            raise RuntimeError("no renderer")

        monkeypatch.setattr(capture_mod, "render_png", boom)
        browser = _browser_for(shop_server)
        browser.goto("http://epsilon.shop-fixture.test/")
        browser.wait_for_load_settled()
        snap = capture_snapshot(browser, "load", store, "s1")
        assert snap.screenshot_ref is None
        assert "screenshot failed" in snap.warning
        assert store.get_blob(snap.har_ref)
