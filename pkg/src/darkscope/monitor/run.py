"""Monitor stage: revisit dynamic pages and judge deception rules.

Each visit loads the page, captures a snapshot, and extracts observations
from its segments: countdown readings, stock quantities, and the set of
offer-text hashes present. Visit 0 performs an immediate reload pair (two
back-to-back loads) to catch stock values that change on every load; the
second load feeds only the reload check, never the scheduled series.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

from darkscope.browser.fetch import HttpFetcher
from darkscope.browser.session import FixtureBrowser
from darkscope.checkout.capture import capture_snapshot
from darkscope.cluster.normalize import normalize_text
from darkscope.monitor.countdown import TimerObservation, judge_countdown, parse_countdown
from darkscope.monitor.schedule import MonitorSchedule, schedule_revisits
from darkscope.monitor.stock import StockObservation, judge_lowstock, parse_stock_quantity
from darkscope.monitor.verdict import DeceptionVerdict
from darkscope.segmenter import segment_page
from darkscope.store import SnapshotStore

log = logging.getLogger(__name__)

_LOWSTOCK_HINT = ("left in stock", "left!", "only a few", "low stock", "limited quantities")


def offer_hash(text: str) -> str:
    return hashlib.sha1(normalize_text(text).encode("utf-8")).hexdigest()[:12]


@dataclass
class PageObservations:
    page: str
    timers: list[TimerObservation] = field(default_factory=list)
    stock: list[StockObservation] = field(default_factory=list)
    presence: list[tuple[float, frozenset]] = field(default_factory=list)
    reload_pair: tuple[StockObservation, StockObservation] | None = None
    snapshot_refs: list[str] = field(default_factory=list)


def observe_once(browser: FixtureBrowser, url: str, store: SnapshotStore,
                 session_ref: str, observed_at: float) -> tuple[str, list]:
    browser.goto(url)
    browser.wait_for_load_settled()
    snap = capture_snapshot(browser, "load", store, session_ref)
    segments = segment_page(browser.current_page, captured_at=observed_at)
    return snap.snapshot_id, segments


def collect_observations(
    targets: list[str],
    schedule: MonitorSchedule,
    store: SnapshotStore,
    fetcher_factory,
    sleep,
    reload_check: bool = True,
) -> dict[str, PageObservations]:
    """Run the revisit schedule, returning per-page observation bundles."""
    import time as _time

    observations = {t: PageObservations(page=t) for t in targets}
    browsers = {t: FixtureBrowser(fetcher_factory(), politeness_delay=0.0) for t in targets}

    def ingest(target: str, observed_at: float, into_series: bool) -> list[StockObservation]:
        snap_id, segments = observe_once(
            browsers[target], target, store, f"monitor:{target}", observed_at
        )
        bundle = observations[target]
        stock_here: list[StockObservation] = []
        hashes = set()
        for seg in segments:
            hashes.add(offer_hash(seg.inner_text))
            remaining = parse_countdown(seg.inner_text)
            if remaining is not None and into_series:
                bundle.timers.append(TimerObservation(
                    page=target, snapshot_ref=snap_id, remaining_seconds=remaining,
                    offer_text_hash=offer_hash(seg.inner_text), observed_at=observed_at,
                ))
            lowered = seg.inner_text.lower()
            quantity = parse_stock_quantity(seg.inner_text)
            if quantity is not None or any(h in lowered for h in _LOWSTOCK_HINT):
                stock_here.append(StockObservation(
                    page=target, product=target, quantity=quantity,
                    observed_at=observed_at, snapshot_ref=snap_id,
                ))
        if into_series:
            bundle.presence.append((observed_at, frozenset(hashes)))
            bundle.stock.extend(stock_here)
            bundle.snapshot_refs.append(snap_id)
        return stock_here

    def fetch(target: str):
        observed_at = _time.time()
        bundle = observations[target]
        is_first = not bundle.snapshot_refs
        ingest(target, observed_at, into_series=True)
        if is_first and reload_check:
            second = ingest(target, _time.time(), into_series=False)
            first_stock = [s for s in bundle.stock if s.observed_at == observed_at]
            if first_stock and second:
                bundle.reload_pair = (first_stock[0], second[0])
        return bundle.snapshot_refs[-1]

    schedule_revisits(schedule, fetch, sleep=sleep, targets=targets)
    return observations


def judge_page(bundle: PageObservations, expiry_margin: float | None = None) -> list[DeceptionVerdict]:
    verdicts = []
    if len(bundle.timers) >= 2:
        if expiry_margin is None:
            verdicts.append(judge_countdown(bundle.timers, bundle.presence))
        else:
            verdicts.append(judge_countdown(bundle.timers, bundle.presence,
                                            expiry_margin=expiry_margin))
    if len(bundle.stock) >= 4 or bundle.reload_pair is not None:
        verdicts.append(judge_lowstock(bundle.stock, bundle.reload_pair))
    return verdicts


def run_monitor(
    targets: list[str],
    store: SnapshotStore,
    host_map: dict[str, tuple[str, int]],
    schedule: MonitorSchedule,
    sleep,
    reload_check: bool = True,
) -> dict[str, list[DeceptionVerdict]]:
    observations = collect_observations(
        targets, schedule, store,
        fetcher_factory=lambda: HttpFetcher(host_map),
        sleep=sleep, reload_check=reload_check,
    )
    # Scale the persistence margin with the revisit cadence so compressed
    # test schedules keep the same discrimination as real multi-hour ones.
    expiry_margin = min(60.0, schedule.interval / 2.0)
    results: dict[str, list[DeceptionVerdict]] = {}
    for target, bundle in observations.items():
        verdicts = judge_page(bundle, expiry_margin=expiry_margin)
        results[target] = verdicts
        for verdict in verdicts:
            store.append_index("verdicts", {"page": target, **verdict.to_record()})
        log.info("monitor %s: %s", target,
                 [f"{v.pattern_kind}/{v.rule}/{v.verdict}" for v in verdicts])
    return results
