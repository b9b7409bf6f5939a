"""Pipeline orchestration: corpus -> discover -> crawl -> segment-export ->
cluster -> monitor -> report.

Every stage is idempotent over completed work: it writes a completion marker
and is skipped on re-run, so an interrupted pipeline resumes where it
stopped. Fixture mode serves the bundled shop corpus from a local scripted
server; nothing reaches the live web.
"""

from __future__ import annotations

import json
import logging
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

from darkscope.browser.fetch import HttpFetcher
from darkscope.browser.har import read_har
from darkscope.browser.session import FixtureBrowser
from darkscope.checkout.flow import run_checkout_flow
from darkscope.cluster import ClusterParams, run_clustering
from darkscope.config import PipelineConfig
from darkscope.corpus.build import build_corpus, read_corpus_file
from darkscope.corpus.classify import FixtureCategoryClient
from darkscope.corpus.language import extract_visible_text
from darkscope.errors import NavigationError
from darkscope.finder.discover import DiscoveryBudget, discover_product_urls
from darkscope.finder.training import load_labeled_urls, train_url_classifier
from darkscope.fixtures.shopserver import FixtureShopServer
from darkscope.fixtures.sites import (
    build_deception_pages,
    build_five_site_corpus,
    five_site_categories,
    five_site_ranked_list,
    DECEPTION_HOST,
)
from darkscope.monitor.attribution import entity_prevalence, load_entity_registry
from darkscope.monitor.countdown import parse_countdown
from darkscope.monitor.run import run_monitor
from darkscope.monitor.schedule import MonitorSchedule
from darkscope.monitor.stock import parse_stock_quantity
from darkscope.segmenter import Segment
from darkscope.store import SnapshotStore
from darkscope.taxonomy.instances import InstanceStore
from darkscope.taxonomy.registry import load_taxonomy
from darkscope.taxonomy.stats import prevalence_report

log = logging.getLogger(__name__)

STAGES = ("corpus", "discover", "crawl", "segment-export", "cluster", "monitor", "report")


class StageError(Exception):
    pass


class Pipeline:
    def __init__(self, config: PipelineConfig, host_map: dict[str, tuple[str, int]] | None = None):
        self.config = config
        self.store = SnapshotStore(config.store_root)
        self._server: FixtureShopServer | None = None
        self._host_map = host_map
        self._reports: dict[str, dict] = {}

    # -- fixture plumbing -------------------------------------------------------

    def _ensure_server(self) -> dict[str, tuple[str, int]]:
        if self._host_map is not None:
            return self._host_map
        if not self.config.fixture_mode:
            raise StageError("no host map configured and fixture_mode is off")
        server = FixtureShopServer()
        for host, pages in build_five_site_corpus().items():
            server.add_site(host, pages)
        server.add_site(DECEPTION_HOST, build_deception_pages())
        server.start()
        self._server = server
        self._host_map = server.host_map()
        return self._host_map

    def close(self) -> None:
        if self._server is not None:
            self._server.stop()
            self._server = None

    def __enter__(self) -> "Pipeline":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- markers ------------------------------------------------------------------

    def _marker(self, stage: str) -> Path:
        return self.store.root / f"stage_{stage.replace('-', '_')}.json"

    def _done(self, stage: str) -> bool:
        return self._marker(stage).is_file()

    def _finish(self, stage: str, report: dict) -> dict:
        report = {"stage": stage, **report}
        self._marker(stage).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n",
                                       encoding="utf-8")
        self._reports[stage] = report
        return report

    def _require(self, stage: str, needed_for: str) -> None:
        if not self._done(stage):
            raise StageError(
                f"stage {needed_for!r} needs {stage!r} to run first; "
                f"run `darkscope run --stages {stage}`"
            )

    # -- stages --------------------------------------------------------------------

    def stage_corpus(self) -> dict:
        if self._done("corpus"):
            return self._reports.setdefault("corpus", json.loads(self._marker("corpus").read_text()))
        host_map = self._ensure_server()
        list_path = self.config.corpus_list
        if list_path is None:
            list_path = self.store.root / "ranked_list.csv"
            list_path.write_text(five_site_ranked_list(), encoding="utf-8")
        client = FixtureCategoryClient(five_site_categories())
        fetcher = HttpFetcher(host_map)

        def homepage_text(domain: str) -> str:
            return extract_visible_text(fetcher.fetch(f"http://{domain}/").text)

        records, report = build_corpus(
            list_path, client, homepage_text,
            out_path=self.store.root / "corpus.tsv",
            target_lang=self.config.target_lang,
            cache_path=self.store.root / "category_cache.tsv",
            workers=1,
        )
        return self._finish("corpus", {
            "ingested": report.ingested,
            "shopping": report.shopping,
            "kept": len(records),
            "fetch_failures": len(report.language.fetch_failures),
        })

    def stage_discover(self) -> dict:
        if self._done("discover"):
            return self._reports.setdefault("discover", json.loads(self._marker("discover").read_text()))
        self._require("corpus", "discover")
        host_map = self._ensure_server()
        records = read_corpus_file(self.store.root / "corpus.tsv")
        model, cv = train_url_classifier(load_labeled_urls(), seed=self.config.classifier_seed)
        budget = DiscoveryBudget(
            max_urls_visited=self.config.max_urls_visited,
            max_wall_time=self.config.max_wall_time,
            max_product_pages=self.config.max_product_pages,
            max_visits_per_url=self.config.max_visits_per_url,
        )
        products: dict[str, list[str]] = {}
        failures: list[str] = []
        for rec in records:
            browser = FixtureBrowser(HttpFetcher(host_map))
            try:
                urls, trace = discover_product_urls(f"http://{rec.domain}/", model, budget, browser)
            except NavigationError:
                failures.append(rec.domain)
                continue
            if trace.stop_reason == "homepage_unreachable":
                failures.append(rec.domain)
                continue
            products[rec.domain] = urls
        out = self.store.root / "discovery.json"
        out.write_text(json.dumps({"products": products, "failures": failures},
                                  indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return self._finish("discover", {
            "sites": len(records),
            "product_urls": sum(len(v) for v in products.values()),
            "cv_accuracy": cv,
            "failures": failures,
        })

    def stage_crawl(self) -> dict:
        if self._done("crawl"):
            return self._reports.setdefault("crawl", json.loads(self._marker("crawl").read_text()))
        self._require("discover", "crawl")
        host_map = self._ensure_server()
        discovery = json.loads((self.store.root / "discovery.json").read_text())
        jobs = [
            (site, url)
            for site, urls in sorted(discovery["products"].items())
            for url in urls
        ]

        def one(job: tuple[str, str]) -> str:
            site, url = job
            browser = FixtureBrowser(HttpFetcher(host_map))
            session = run_checkout_flow(url, browser, self.store, site=site)
            return session.outcome

        with ThreadPoolExecutor(max_workers=self.config.workers) as pool:
            outcomes = list(pool.map(one, jobs))
        counts: dict[str, int] = {}
        for outcome in outcomes:
            counts[outcome] = counts.get(outcome, 0) + 1
        return self._finish("crawl", {"sessions": len(jobs), "outcomes": counts})

    def stage_segment_export(self) -> dict:
        if self._done("segment-export"):
            return self._reports.setdefault(
                "segment-export", json.loads(self._marker("segment-export").read_text()))
        self._require("crawl", "segment-export")
        rows = list(self.store.read_index("segments"))
        out_dir = self.store.root / "segments"
        out_dir.mkdir(parents=True, exist_ok=True)
        by_site: dict[str, list[dict]] = {}
        for row in rows:
            by_site.setdefault(row["site"], []).append(row)
        for site, site_rows in sorted(by_site.items()):
            with open(out_dir / f"{site}.ndjson", "w", encoding="utf-8") as fh:
                for row in site_rows:
                    fh.write(json.dumps(row, sort_keys=True) + "\n")
        return self._finish("segment-export", {
            "segments": len(rows), "sites": len(by_site)})

    def _load_exported_segments(self) -> list[tuple[Segment, str, str]]:
        out: list[tuple[Segment, str, str]] = []
        for row in self.store.read_index("segments"):
            seg = Segment.from_record(row)
            out.append((seg, row["site"], row["seg_id"]))
        return out

    def stage_cluster(self) -> dict:
        if self._done("cluster"):
            return self._reports.setdefault("cluster", json.loads(self._marker("cluster").read_text()))
        if not self.store.has_index("segments"):
            raise StageError(
                "stage 'cluster' needs segment records; run `darkscope run --stages crawl,segment-export`"
            )
        self._require("segment-export", "cluster")
        triples = self._load_exported_segments()
        segments = [seg for seg, _, _ in triples]
        # source refs must carry (site, seg_id) for the review service
        from darkscope.cluster.normalize import normalize_and_dedupe
        from darkscope.cluster.vocabulary import build_vocabulary, load_stopwords
        from darkscope.cluster.bow import vectorize
        from darkscope.cluster.pca import fit_pca
        from darkscope.cluster.density import hdbscan_cluster
        from darkscope.cluster.summarize import summarize_clusters
        from darkscope.cluster.run import ClusterRunResult

        stopwords = load_stopwords()
        normalized = normalize_and_dedupe(
            (seg.inner_text, site, seg_id) for seg, site, seg_id in triples
        )
        vocabulary = build_vocabulary(normalized, min_df=self.config.min_df, stopwords=stopwords)
        bow = vectorize(normalized, vocabulary, stopwords=stopwords)
        model, projected = fit_pca(bow.counts, variance_target=self.config.variance_target)
        assignment = hdbscan_cluster(projected, ClusterParams(
            min_cluster_size=self.config.min_cluster_size, metric=self.config.metric))
        summaries = summarize_clusters(assignment, normalized, vocabulary, projected)
        result = ClusterRunResult(normalized, vocabulary, assignment, summaries, model.retained_k)
        result.write(self.store.root / "clusters")
        return self._finish("cluster", {
            "unique_segments": len(normalized),
            "vocabulary": len(vocabulary),
            "clusters": assignment.n_clusters,
            "retained_components": model.retained_k,
        })

    def _monitor_targets(self) -> list[str]:
        """Pages whose crawled segments showed dynamic pattern text."""
        targets: list[str] = []
        seen = set()
        for row in self.store.read_index("segments"):
            text = row["inner_text"]
            url = row["page_url"]
            if url in seen:
                continue
            if parse_countdown(text) is not None or parse_stock_quantity(text) is not None:
                seen.add(url)
                targets.append(url)
        return targets

    def stage_monitor(self) -> dict:
        if self._done("monitor"):
            return self._reports.setdefault("monitor", json.loads(self._marker("monitor").read_text()))
        self._require("crawl", "monitor")
        host_map = self._ensure_server()
        targets = self._monitor_targets()
        verdicts_by_rule: dict[str, int] = {}
        if targets:
            schedule = MonitorSchedule(
                interval=self.config.monitor_interval,
                duration=self.config.monitor_duration,
                targets=tuple(targets),
            )
            results = run_monitor(targets, self.store, host_map, schedule,
                                  sleep=time.sleep, reload_check=self.config.reload_check)
            for verdicts in results.values():
                for verdict in verdicts:
                    key = f"{verdict.pattern_kind}/{verdict.rule}/{verdict.verdict}"
                    verdicts_by_rule[key] = verdicts_by_rule.get(key, 0) + 1
        return self._finish("monitor", {"targets": targets, "verdicts": verdicts_by_rule})

    def stage_report(self) -> dict:
        if self._done("report"):
            return self._reports.setdefault("report", json.loads(self._marker("report").read_text()))
        self._require("corpus", "report")
        corpus = [(r.domain, r.rank) for r in read_corpus_file(self.store.root / "corpus.tsv")]
        taxonomy = load_taxonomy()
        instances = InstanceStore(self.store.root / "labels.ndjson", taxonomy).all()
        report = prevalence_report(instances, corpus, bin_width=self.config.rank_bin_width)
        attribution = {}
        if self.store.has_index("snapshots"):
            registry = load_entity_registry()
            site_archives = []
            session_sites = {}
            for row in self.store.read_index("sessions"):
                for snap_id in row.get("snapshot_ids", []):
                    session_sites[snap_id] = row["site"]
            for row in self.store.read_index("snapshots"):
                site = session_sites.get(row["snapshot_id"])
                if site is None:
                    continue
                har_doc = read_har(self.store.get_blob(row["har_ref"]))
                site_archives.append((site, har_doc))
            attribution = entity_prevalence(site_archives, registry)
        doc = {"prevalence": report.to_dict(),
               "entity_prevalence": {k: v for k, v in sorted(attribution.items()) if v > 0},
               "entity_prevalence_full": attribution}
        (self.store.root / "report.json").write_text(
            json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        return self._finish("report", doc)

    # -- entry point ------------------------------------------------------------------

    def run(self, stages: list[str] | None = None) -> dict[str, dict]:
        chosen = list(stages) if stages else list(STAGES)
        unknown = [s for s in chosen if s not in STAGES]
        if unknown:
            raise StageError(f"unknown stages: {unknown}; valid: {list(STAGES)}")
        runners = {
            "corpus": self.stage_corpus,
            "discover": self.stage_discover,
            "crawl": self.stage_crawl,
            "segment-export": self.stage_segment_export,
            "cluster": self.stage_cluster,
            "monitor": self.stage_monitor,
            "report": self.stage_report,
        }
        for stage in STAGES:
            if stage in chosen:
                log.info("pipeline stage: %s", stage)
                runners[stage]()
        return dict(self._reports)
