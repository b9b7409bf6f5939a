"""Checkout-flow simulation over one product page.

The flow mirrors a buyer: dismiss popups, pick one value per required option
group, click the best add-to-cart candidate, then view cart and check out,
snapshotting after load and after every successful step. The flow never
submits payment; it stops at the checkout page.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

from darkscope.browser.session import FixtureBrowser
from darkscope.checkout.capture import Snapshot, capture_snapshot
from darkscope.errors import InteractionError, NavigationError
from darkscope.finder.scoring import (
    ADD_TO_CART_PATTERNS,
    CHECKOUT_PATTERNS,
    VIEW_CART_PATTERNS,
    score_elements,
)
from darkscope.segmenter import PageSegmenter, Segment
from darkscope.store import SnapshotStore

log = logging.getLogger(__name__)

# Simulated pause between captures; keeps captured_at strictly increasing.
_CAPTURE_SPACING = 0.05


class Outcome:
    REACHED_CHECKOUT = "reached_checkout"
    ADDED_TO_CART_ONLY = "added_to_cart_only"
    FAILED = "failed"


@dataclass
class InteractionStep:
    kind: str  # dismiss_popup | select_option | add_to_cart | view_cart | checkout
    element_descriptor: str
    succeeded: bool


@dataclass
class CrawlSession:
    site: str
    product_url: str
    steps: list[InteractionStep] = field(default_factory=list)
    outcome: str = Outcome.FAILED
    failure_reason: str = ""
    started_at: float = 0.0
    ended_at: float = 0.0
    snapshot_ids: list[str] = field(default_factory=list)
    segments: list[Segment] = field(default_factory=list)  # capture side channel

    def to_record(self) -> dict:
        return {
            "site": self.site,
            "product_url": self.product_url,
            "steps": [
                {"kind": s.kind, "element": s.element_descriptor, "succeeded": s.succeeded}
                for s in self.steps
            ],
            "outcome": self.outcome,
            "failure_reason": self.failure_reason,
            "started_at": self.started_at,
            "ended_at": self.ended_at,
            "snapshot_ids": self.snapshot_ids,
        }


def classify_outcome(session: CrawlSession) -> str:
    """Total over finalized sessions: checkout success wins, then add-to-cart."""
    succeeded = {s.kind for s in session.steps if s.succeeded}
    if "checkout" in succeeded:
        return Outcome.REACHED_CHECKOUT
    if "add_to_cart" in succeeded:
        return Outcome.ADDED_TO_CART_ONLY
    return Outcome.FAILED


def _top_hit_ref(browser: FixtureBrowser, patterns, exclude: set[str] = frozenset()) -> str | None:
    # `exclude` keeps an already-clicked button (e.g. "Add to Cart", which the
    # loose view-cart pattern also matches) from being picked twice.
    scores = score_elements(browser.element_views(), patterns)
    for score in scores:
        if not score.regex_hit:
            return None
        if score.element_ref not in exclude:
            return score.element_ref
    return None


def run_checkout_flow(
    product_url: str,
    browser: FixtureBrowser,
    store: SnapshotStore,
    site: str = "",
    session_ref: str | None = None,
) -> CrawlSession:
    session = CrawlSession(site=site or product_url, product_url=product_url)
    session_ref = session_ref or f"session-{abs(hash(product_url)) % 10**10:010d}"
    session.started_at = browser.clock.now()

    segmenter: PageSegmenter | None = None

    def record_segments(segments: list[Segment], snapshot_id: str) -> None:
        for seg in segments:
            session.segments.append(seg)
            store.append_index("segments", {
                "seg_id": seg.record_id(),
                "site": session.site,
                "snapshot_id": snapshot_id,
                **seg.to_record(),
            })

    def snapshot(trigger: str) -> Snapshot | None:
        nonlocal segmenter
        browser.clock.sleep(_CAPTURE_SPACING)
        snap = capture_snapshot(browser, trigger, store, session_ref)
        session.snapshot_ids.append(snap.snapshot_id)
        if segmenter is None or segmenter.page is not browser.current_page:
            segmenter = PageSegmenter(browser.current_page)
            record_segments(segmenter.segment_page(captured_at=snap.captured_at), snap.snapshot_id)
        for batch in browser.drain_mutation_batches():
            record_segments(segmenter.on_mutation_batch(batch, captured_at=snap.captured_at),
                            snap.snapshot_id)
        return snap

    def attempt(kind: str, ref: str | None) -> bool:
        """Click `ref` (or record a miss), snapshot on success."""
        if ref is None:
            session.steps.append(InteractionStep(kind, "not-found", False))
            return False
        el = browser.resolve_view(ref)
        if el is None:
            session.steps.append(InteractionStep(kind, ref, False))
            return False
        try:
            browser.click(el)
        except (InteractionError, NavigationError) as exc:
            log.info("%s failed on %s: %s", kind, session.product_url, exc)
            session.steps.append(InteractionStep(kind, ref, False))
            return False
        browser.wait_for_load_settled()
        session.steps.append(InteractionStep(kind, ref, True))
        snapshot("click")
        return True

    try:
        browser.goto(product_url)
    except NavigationError as exc:
        session.failure_reason = f"navigation: {exc}"
        session.outcome = Outcome.FAILED
        session.ended_at = browser.clock.now()
        return session

    browser.wait_for_load_settled()
    snapshot("load")

    # 1. dismiss popups
    page = browser.current_page
    for el in list(page.root.iter()):
        if el.attr("data-dismiss") is not None and page.is_visible(el):
            try:
                browser.click(el)
                browser.wait_for_load_settled()
                session.steps.append(InteractionStep("dismiss_popup", f"node-{el.node_id}", True))
                snapshot("click")
            except (InteractionError, NavigationError):
                session.steps.append(InteractionStep("dismiss_popup", f"node-{el.node_id}", False))

    # 2. one value per required option group (skip empty placeholder options)
    for group in browser.required_option_groups():
        options = group.find_all("option")
        chosen = next(
            (o for o in options
             if o.attr("data-out-of-stock") is None
             and (o.attr("value") or o.raw_text().strip())),
            None,
        )
        descriptor = group.attr("name") or f"node-{group.node_id}"
        if chosen is None:
            session.steps.append(InteractionStep("select_option", descriptor, False))
            continue
        try:
            browser.select_option(group, chosen)
            session.steps.append(InteractionStep("select_option", descriptor, True))
            snapshot("option_select")
        except InteractionError:
            session.steps.append(InteractionStep("select_option", descriptor, False))

    # 3..5. add to cart, view cart, checkout
    add_ref = _top_hit_ref(browser, ADD_TO_CART_PATTERNS)
    if attempt("add_to_cart", add_ref):
        used = {add_ref} if add_ref else set()
        view_ref = _top_hit_ref(browser, VIEW_CART_PATTERNS, exclude=used)
        if attempt("view_cart", view_ref):
            if view_ref:
                used.add(view_ref)
            attempt("checkout", _top_hit_ref(browser, CHECKOUT_PATTERNS, exclude=used))

    session.outcome = classify_outcome(session)
    if session.outcome == Outcome.FAILED and not session.failure_reason:
        session.failure_reason = "no successful add-to-cart interaction"
    session.ended_at = browser.clock.now()
    store.append_index("sessions", session.to_record())
    return session
