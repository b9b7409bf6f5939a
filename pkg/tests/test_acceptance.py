"""Acceptance suite: every release criterion at its stated tolerance.

Run with `pytest tests/test_acceptance.py -s` to see one pass/fail line per
criterion. Each criterion also enforces its runtime budget.
"""

from __future__ import annotations

import functools
import math
import random
import time

import numpy as np
import pytest

CRITERIA_SEEN = []


def criterion(name, budget_seconds=None):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            started = time.monotonic()
            try:
                result = fn(*args, **kwargs)
            except BaseException:
                print(f"\n[FAIL] {name}")
                raise
            elapsed = time.monotonic() - started
            if budget_seconds is not None and elapsed > budget_seconds:
                print(f"\n[FAIL] {name} (took {elapsed:.1f}s > {budget_seconds}s budget)")
                raise AssertionError(f"runtime budget exceeded: {elapsed:.1f}s")
            CRITERIA_SEEN.append(name)
            print(f"\n[PASS] {name} ({elapsed:.2f}s)")
            return result
        return wrapper
    return decorate


# ---------------------------------------------------------------------------
# 1. Confusion-matrix metrics reproduce the evaluation table exactly
# ---------------------------------------------------------------------------

@criterion("confusion-matrix metrics (accuracy 0.892/0.940, FNR 0.9298/0.1754)", 1.0)
def test_criterion_confusion_metrics():
    from darkscope.corpus.records import ConfusionMatrix, confusion_metrics

    alexa = confusion_metrics(ConfusionMatrix(tn=442, fp=1, fn=53, tp=4))
    assert alexa["accuracy"] == pytest.approx(0.892, abs=1e-12)
    assert alexa["fnr"] == pytest.approx(0.9298, abs=1e-4)
    webshrinker = confusion_metrics(ConfusionMatrix(tn=423, fp=20, fn=10, tp=47))
    assert webshrinker["accuracy"] == pytest.approx(0.940, abs=1e-12)
    assert webshrinker["fnr"] == pytest.approx(0.1754, abs=1e-4)


# ---------------------------------------------------------------------------
# 2. URL classifier: >= 0.80 five-fold CV on the bundled corpus (>= 700 URLs)
# ---------------------------------------------------------------------------

@criterion("url classifier five-fold CV >= 0.80 on bundled corpus, deterministic", 30.0)
def test_criterion_url_classifier():
    from darkscope.finder.training import load_labeled_urls, train_url_classifier

    pairs = load_labeled_urls()
    assert len(pairs) >= 700
    model_a, cv_a = train_url_classifier(pairs, folds=5, seed=0)
    model_b, cv_b = train_url_classifier(pairs, folds=5, seed=0)
    assert cv_a >= 0.80
    assert cv_a == cv_b
    assert np.array_equal(model_a.weights, model_b.weights)


# ---------------------------------------------------------------------------
# 3. Segmentation equals the hand-traced outputs on >= 10 fixture pages
# ---------------------------------------------------------------------------

@criterion("segmentation matches hand traces on >= 10 pages "
           "(script exclusion, 1px, 30% recursion)", 60.0)
def test_criterion_segmentation_oracle():
    from darkscope.segmenter import segment_page
    from tests.test_segmenter import CASES, load, tag_text_set

    assert len(CASES) >= 10
    names = [c[0] for c in CASES]
    assert "ignored_tags" in names and "one_pixel" in names
    assert "oversized_leaf_recursion" in names and "oversized_wrapper" in names
    for name, html, expected in CASES:
        browser = load(html)
        got = tag_text_set(segment_page(browser.current_page))
        assert got == expected, f"page {name}: {got} != {expected}"


# ---------------------------------------------------------------------------
# 4. Clustering suite: blobs, dedup conservation, PCA plane, determinism
# ---------------------------------------------------------------------------

@criterion("clustering: 2 blob clusters (>=90 assigned, L1==L2), dedup "
           "conservation, PCA plane k=2 ratio 1.0, byte-identical reruns", 60.0)
def test_criterion_clustering(tmp_path):
    from darkscope.cluster import ClusterParams, fit_pca, hdbscan_cluster, run_clustering
    from darkscope.cluster.density import NOISE
    from darkscope.cluster.normalize import normalize_and_dedupe
    from darkscope.segmenter import Segment
    from tests.test_hdbscan import two_blob_fixture
    from tests.test_pca import plane_fixture

    points = two_blob_fixture()
    l1 = hdbscan_cluster(points, ClusterParams(10, "l1"))
    l2 = hdbscan_cluster(points, ClusterParams(10, "l2"))
    assert l1.n_clusters == l2.n_clusters == 2
    assert int((l2.labels != NOISE).sum()) >= 90
    assert l1.partition_key() == l2.partition_key()

    texts = ["Only 3 left!", "only 5 left!", "add to cart", "ADD TO CART",
             "checkout now", "$4.99", "$9.99"]
    normalized = normalize_and_dedupe([(t, "s", f"r{i}") for i, t in enumerate(texts)])
    assert sum(seg.duplicate_count for seg in normalized) == len(texts)

    model, _ = fit_pca(plane_fixture(), variance_target=0.95)
    assert model.retained_k == 2
    assert model.cumulative_ratio == pytest.approx(1.0, abs=1e-9)

    def make_segments():
        base = ["only 3 left", "only 5 left", "add to cart", "view cart now",
                "checkout today", "free shipping offer", "sale ends soon",
                "new arrivals weekly"]
        segs = []
        for i in range(40):
            text = base[i % len(base)] + f" {i % 4}"
            segs.append(Segment("div", text, (0.0, float(i), 100.0, 20.0),
                                "rgb(0,0,0)", "rgb(255,255,255)",
                                f"http://s{i % 5}.example/p", "initial", float(i)))
        return segs

    out_a, out_b = tmp_path / "a", tmp_path / "b"
    run_clustering(make_segments(), min_df=1, params=ClusterParams(2, "l2")).write(out_a)
    run_clustering(make_segments(), min_df=1, params=ClusterParams(2, "l2")).write(out_b)
    for name in ("vocabulary.tsv", "assignments.tsv", "clusters.json"):
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), name


# ---------------------------------------------------------------------------
# 5. Deception rules: 6 scripted fixtures, zero FP and zero FN
# ---------------------------------------------------------------------------

@criterion("deception rules: reset/persist/random/period-3 flagged, honest "
           "timer and constant stock clean (0 FP, 0 FN)", 120.0)
def test_criterion_deception_rules(tmp_path):
    from darkscope.fixtures.shopserver import FixtureShopServer
    from darkscope.fixtures.sites import DECEPTION_HOST, build_deception_pages
    from darkscope.monitor.run import run_monitor
    from darkscope.monitor.schedule import MonitorSchedule
    from darkscope.store import SnapshotStore

    server = FixtureShopServer()
    server.add_site(DECEPTION_HOST, build_deception_pages())
    server.start()
    try:
        expected = {
            "reset-timer.html": ("countdown", "RESET"),
            "persist-offer.html": ("countdown", "PERSIST"),
            "honest-timer.html": None,
            "random-stock.html": ("lowstock", "RANDOM"),
            "schedule-stock.html": ("lowstock", "SCHEDULE"),
            "constant-stock.html": None,
        }
        targets = [f"http://{DECEPTION_HOST}/{page}" for page in expected]
        store = SnapshotStore(tmp_path / "store")
        schedule = MonitorSchedule(interval=1.0, duration=7.0, targets=tuple(targets))
        results = run_monitor(targets, store, server.host_map(), schedule, sleep=time.sleep)
        for target, verdicts in results.items():
            page = target.rsplit("/", 1)[-1]
            deceptive = [(v.pattern_kind, v.rule) for v in verdicts if v.verdict == "deceptive"]
            if expected[page] is None:
                assert deceptive == [], f"false positive on {page}: {deceptive}"
            else:
                assert deceptive == [expected[page]], f"{page}: {deceptive}"
    finally:
        server.stop()


# ---------------------------------------------------------------------------
# 6. Attribution: seeded entities recovered exactly
# ---------------------------------------------------------------------------

@criterion("attribution: seeded (endpoint, entity) mappings and prevalence counts exact")
def test_criterion_attribution():
    from darkscope.monitor.attribution import (
        attribute_third_party,
        entity_prevalence,
        load_entity_registry,
    )

    def har(entries):
        return {"log": {"version": "1.2", "entries": [
            {"request": {"method": "GET", "url": url},
             "response": {"status": 200, "content": {"mimeType": "t", "text": body}}}
            for url, body in entries
        ]}}

    registry = load_entity_registry()
    doc = har([
        ("http://shop-a.example/product", "Jane from Washington, DC just purchased"),
        ("http://notif.fomo.com/feed.js", '{"name":"Jane","location":"Washington, DC"}'),
        ("http://cdn.beeketing.com/n.js", '{"name":"Emma","location":"Texas"}'),
    ])
    mapped = attribute_third_party([("Jane", "Washington, DC"), ("Emma", "Texas")],
                                   doc, registry, first_party_domain="shop-a.example")
    assert {(e, entity.name if entity else None) for e, entity in mapped} == {
        ("fomo.com", "Fomo"), ("beeketing.com", "Beeketing")}

    archives = [
        ("shop-a.example", doc),
        ("shop-b.example", har([("http://notif.fomo.com/feed.js", "x")])),
        ("shop-c.example", har([("http://shop-c.example/", "nothing")])),
    ]
    counts = entity_prevalence(archives, registry)
    assert counts["Fomo"] == 2
    assert counts["Beeketing"] == 1
    assert sum(1 for v in counts.values() if v) == 2


# ---------------------------------------------------------------------------
# 7. Statistics: kappa oracle values and 1,000 randomized property cases
# ---------------------------------------------------------------------------

@criterion("statistics: kappa 1.0 / 0.4 oracles, Spearman +/-1, 1000 "
           "randomized symmetry and relabeling cases")
def test_criterion_statistics():
    from darkscope.taxonomy.stats import AgreementRecord, StatsError, cohens_kappa, spearman_rank

    same = tuple("aabbc")
    assert cohens_kappa(AgreementRecord((), same, same)) == 1.0

    coder_a, coder_b = [], []
    for i, row in enumerate([[20, 5], [10, 15]]):
        for j, count in enumerate(row):
            coder_a.extend([i] * count)
            coder_b.extend([j] * count)
    kappa = cohens_kappa(AgreementRecord((), tuple(coder_a), tuple(coder_b)))
    assert kappa == pytest.approx(0.4, abs=1e-9)

    assert spearman_rank([1, 2, 3, 4], [1, 4, 9, 16])[0] == 1.0
    assert spearman_rank([1, 2, 3, 4], [9, 7, 3, 1])[0] == -1.0

    rng = random.Random(991)
    checked = 0
    while checked < 1000:
        n = rng.randint(2, 30)
        a = tuple(rng.choice("abcd") for _ in range(n))
        b = tuple(rng.choice("abcd") for _ in range(n))
        try:
            base = cohens_kappa(AgreementRecord((), a, b))
        except StatsError:
            continue
        swapped = cohens_kappa(AgreementRecord((), b, a))
        rename = {"a": "w", "b": "x", "c": "y", "d": "z"}
        renamed = cohens_kappa(AgreementRecord(
            (), tuple(rename[s] for s in a), tuple(rename[s] for s in b)))
        assert math.isclose(base, swapped, abs_tol=1e-12)
        assert math.isclose(base, renamed, abs_tol=1e-12)
        checked += 1


# ---------------------------------------------------------------------------
# 8. End to end: full pipeline over the bundled five-site corpus
# ---------------------------------------------------------------------------

@criterion("end-to-end pipeline over the 5-site fixture corpus with exact "
           "per-type report counts", 600.0)
def test_criterion_end_to_end(tmp_path):
    from darkscope.config import PipelineConfig
    from darkscope.fixtures.sites import FIVE_SITE_MANIFEST, apply_manifest_labels
    from darkscope.pipeline import Pipeline

    cfg = PipelineConfig(store_root=tmp_path / "store",
                         monitor_interval=0.3, monitor_duration=2.1)
    with Pipeline(cfg) as pipeline:
        pipeline.run(["corpus", "discover", "crawl", "segment-export", "cluster", "monitor"])
        apply_manifest_labels(cfg.store_root)
        report = pipeline.stage_report()

    prevalence = report["prevalence"]
    assert prevalence["per_type_instances"] == FIVE_SITE_MANIFEST["per_type_instances"]
    assert prevalence["per_type_sites"] == FIVE_SITE_MANIFEST["per_type_sites"]
    assert prevalence["total_instances"] == FIVE_SITE_MANIFEST["total_instances"]
    assert prevalence["total_sites_labeled"] == FIVE_SITE_MANIFEST["sites_with_patterns"]
    assert prevalence["corpus_size"] == FIVE_SITE_MANIFEST["corpus_size"]
    assert prevalence["overall_site_fraction"] == pytest.approx(
        FIVE_SITE_MANIFEST["overall_site_fraction"])
    assert report["entity_prevalence"] == {"Beeketing": 1, "Fomo": 1}


def test_all_primary_criteria_ran():
    assert len(CRITERIA_SEEN) == 8
