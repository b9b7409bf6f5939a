"""Classifier-guided discovery of product URLs on one site.

The loop mirrors a user hunting for products: rank the current page's links
by product likelihood, visit the best candidate, and declare a product page
when the add-to-cart scorer fires. After each hit the crawler returns to the
home page. Candidate URLs are capped at `max_visits_per_url` visits; the
home page is flow control and exempt from that cap, though every navigation
(home included) counts against `max_urls_visited`.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Protocol
from urllib.parse import urlsplit

from darkscope.errors import NavigationError
from darkscope.finder.features import extract_url_features
from darkscope.finder.logistic import LogisticModel
from darkscope.finder.scoring import ElementView, is_product_page_score, score_elements

log = logging.getLogger(__name__)

# Minimal second-level public-suffix set; enough to unify www/bare hosts
# without dragging in a full suffix database.
_SECOND_LEVEL_SUFFIXES = {
    "co.uk", "org.uk", "ac.uk", "gov.uk", "com.au", "net.au", "org.au",
    "co.jp", "co.nz", "com.br", "com.mx", "co.in",
}


def registrable_domain(host: str) -> str:
    host = host.lower().rstrip(".")
    labels = host.split(".")
    if len(labels) <= 2:
        return host
    if ".".join(labels[-2:]) in _SECOND_LEVEL_SUFFIXES:
        return ".".join(labels[-3:])
    return ".".join(labels[-2:])


def same_site(url: str, site_url: str) -> bool:
    try:
        a = urlsplit(url).hostname or ""
        b = urlsplit(site_url).hostname or ""
    except ValueError:
        return False
    return bool(a) and registrable_domain(a) == registrable_domain(b)


@dataclass
class DiscoveryBudget:
    max_urls_visited: int = 100
    max_wall_time: float = 15 * 60.0
    max_product_pages: int = 5
    max_visits_per_url: int = 2

    def __post_init__(self):
        for name in ("max_urls_visited", "max_wall_time", "max_product_pages", "max_visits_per_url"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class DiscoveryTrace:
    site: str
    events: list[dict] = field(default_factory=list)
    visits_total: int = 0
    stop_reason: str = ""

    def record(self, action: str, **detail) -> None:
        self.events.append({"action": action, **detail})

    def visit_counts(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for ev in self.events:
            if ev["action"] in ("visit", "home"):
                counts[ev["url"]] = counts.get(ev["url"], 0) + 1
        return counts


class DiscoverySession(Protocol):
    """What the discovery loop needs from a browser session."""

    @property
    def current_url(self) -> str: ...

    def goto(self, url: str) -> None: ...

    def links(self) -> list[str]: ...

    def element_views(self) -> list[ElementView]: ...

    def elapsed(self) -> float: ...


def rank_candidate_urls(
    classifier: LogisticModel,
    urls: list[str],
    visit_counts: dict[str, int],
    max_visits_per_url: int = 2,
) -> list[str]:
    """Descending product probability; exhausted URLs removed; ties broken by
    shorter URL then lexicographic."""
    eligible = [u for u in urls if visit_counts.get(u, 0) < max_visits_per_url]
    if not eligible:
        return []
    scored = []
    for url in eligible:
        try:
            prob = float(classifier.predict_proba([extract_url_features(url).vector()])[0])
        except ValueError:
            continue
        scored.append((url, prob))
    scored.sort(key=lambda t: (-t[1], len(t[0]), t[0]))
    return [u for u, _ in scored]


def discover_product_urls(
    site_url: str,
    classifier: LogisticModel,
    budget: DiscoveryBudget,
    session: DiscoverySession,
) -> tuple[list[str], DiscoveryTrace]:
    """Run the discovery loop; returns (product URLs, trace).

    A homepage load failure yields an empty result with a site-failure event;
    mid-crawl navigation errors skip the URL and continue.
    """
    trace = DiscoveryTrace(site=site_url)
    found: list[str] = []
    visit_counts: dict[str, int] = {}

    def navigate(url: str, action: str) -> bool:
        session.goto(url)
        trace.visits_total += 1
        trace.record(action, url=url)
        return True

    try:
        navigate(site_url, "home")
    except NavigationError as exc:
        trace.record("site_failure", url=site_url, reason=str(exc))
        trace.stop_reason = "homepage_unreachable"
        return [], trace

    home_url = session.current_url

    while True:
        if len(found) >= budget.max_product_pages:
            trace.stop_reason = "max_product_pages"
            break
        if trace.visits_total >= budget.max_urls_visited:
            trace.stop_reason = "max_urls_visited"
            break
        if session.elapsed() >= budget.max_wall_time:
            trace.stop_reason = "max_wall_time"
            break

        candidates = [u for u in session.links() if same_site(u, site_url) and u not in (home_url,)]
        ranked = rank_candidate_urls(classifier, candidates, visit_counts, budget.max_visits_per_url)

        if not ranked:
            if session.current_url == home_url:
                trace.stop_reason = "exhausted"
                break
            navigate(home_url, "home")
            continue

        target = ranked[0]
        visit_counts[target] = visit_counts.get(target, 0) + 1
        try:
            navigate(target, "visit")
        except NavigationError as exc:
            trace.record("skip_error", url=target, reason=str(exc))
            continue

        scores = score_elements(session.element_views())
        if is_product_page_score(scores) and target not in found:
            found.append(target)
            trace.record("product", url=target, score=scores[0].total)
            if len(found) < budget.max_product_pages and trace.visits_total < budget.max_urls_visited:
                navigate(home_url, "home")
        else:
            trace.record("nonproduct", url=target)

    log.info("discovery on %s: %d product URLs, %d visits, stop=%s",
             site_url, len(found), trace.visits_total, trace.stop_reason)
    return found, trace
