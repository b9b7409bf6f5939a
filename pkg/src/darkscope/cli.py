"""darkscope command-line interface."""

from __future__ import annotations

import json
import logging
import os
import time
from pathlib import Path

import click

from darkscope.config import load_config, parse_duration

log = logging.getLogger(__name__)


def _store_root(config, override: str | None) -> Path:
    env = os.environ.get("DARKSCOPE_STORE")
    return Path(override or env or config.store_root)


@click.group()
@click.option("--config", "config_path", type=click.Path(), default=None,
              help="Sectioned key-value config file; flags override it.")
@click.option("--verbose", is_flag=True, default=False)
@click.pass_context
def main(ctx, config_path, verbose):
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO,
                        format="%(levelname)s %(name)s %(message)s")
    ctx.obj = load_config(config_path)


@main.group()
def corpus():
    """Corpus building."""


@corpus.command("build")
@click.option("--list", "list_path", required=True, type=click.Path(exists=True))
@click.option("--target-lang", default="en", show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--offline-fixtures", "fixtures_dir", type=click.Path(exists=True), default=None,
              help="Directory with categories.json and <host>/index.html pages.")
@click.option("--cache", "cache_path", type=click.Path(), default=None)
@click.pass_obj
def corpus_build(config, list_path, target_lang, out_path, fixtures_dir, cache_path):
    from darkscope.corpus.build import build_corpus
    from darkscope.corpus.classify import FixtureCategoryClient
    from darkscope.corpus.language import extract_visible_text
    from darkscope.browser.fetch import DirectoryFetcher

    if fixtures_dir is None:
        raise click.UsageError("live classification is not wired; pass --offline-fixtures")
    client = FixtureCategoryClient.from_dir(fixtures_dir)
    fetcher = DirectoryFetcher(Path(fixtures_dir) / "pages")

    def homepage_text(domain: str) -> str:
        return extract_visible_text(fetcher.fetch(f"https://{domain}/").text)

    records, report = build_corpus(
        list_path, client, homepage_text, out_path,
        target_lang=target_lang, cache_path=cache_path,
    )
    click.echo(f"kept {len(records)} of {report.ingested} sites -> {out_path}")


@main.command("train")
@click.option("--labeled", "labeled_path", type=click.Path(exists=True), default=None,
              help="label<TAB>url file; defaults to the bundled corpus.")
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True)
@click.option("--folds", default=5, show_default=True)
def train(labeled_path, out_path, seed, folds):
    from darkscope.finder.training import load_labeled_urls, train_url_classifier

    pairs = load_labeled_urls(labeled_path)
    model, cv = train_url_classifier(pairs, folds=folds, seed=seed)
    model.save(out_path)
    click.echo(f"trained on {len(pairs)} URLs; {folds}-fold CV accuracy {cv:.4f} -> {out_path}")


@main.command("find-products")
@click.option("--corpus", "corpus_path", required=True, type=click.Path(exists=True))
@click.option("--model", "model_path", required=True, type=click.Path(exists=True))
@click.option("--out", "out_dir", required=True, type=click.Path())
@click.option("--fixture-root", type=click.Path(exists=True), default=None,
              help="Serve pages from <root>/<host>/<path> instead of the live web.")
@click.pass_obj
def find_products(config, corpus_path, model_path, out_dir, fixture_root):
    from darkscope.browser.fetch import DirectoryFetcher
    from darkscope.browser.session import FixtureBrowser
    from darkscope.corpus.build import read_corpus_file
    from darkscope.finder.discover import DiscoveryBudget, discover_product_urls
    from darkscope.finder.logistic import LogisticModel

    if fixture_root is None:
        raise click.UsageError("live crawling is not wired; pass --fixture-root")
    model = LogisticModel.load(model_path)
    budget = DiscoveryBudget(
        max_urls_visited=config.max_urls_visited,
        max_wall_time=config.max_wall_time,
        max_product_pages=config.max_product_pages,
        max_visits_per_url=config.max_visits_per_url,
    )
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    results = {}
    for rec in read_corpus_file(corpus_path):
        browser = FixtureBrowser(DirectoryFetcher(fixture_root))
        urls, trace = discover_product_urls(f"https://{rec.domain}/", model, budget, browser)
        results[rec.domain] = {"product_urls": urls, "visits": trace.visits_total,
                               "stop_reason": trace.stop_reason, "events": trace.events}
    (out / "products.json").write_text(json.dumps(results, indent=2, sort_keys=True) + "\n")
    total = sum(len(r["product_urls"]) for r in results.values())
    click.echo(f"{total} product URLs across {len(results)} sites -> {out}/products.json")


@main.command("crawl-checkout")
@click.option("--products", "products_path", required=True, type=click.Path(exists=True),
              help="products.json from find-products.")
@click.option("--out", "store_root", required=True, type=click.Path())
@click.option("--workers", default=2, show_default=True)
@click.option("--fixture-root", type=click.Path(exists=True), required=True)
def crawl_checkout(products_path, store_root, workers, fixture_root):
    from concurrent.futures import ThreadPoolExecutor
    from darkscope.browser.fetch import DirectoryFetcher
    from darkscope.browser.session import FixtureBrowser
    from darkscope.checkout.flow import run_checkout_flow
    from darkscope.store import SnapshotStore

    doc = json.loads(Path(products_path).read_text())
    store = SnapshotStore(store_root)
    jobs = [(site, url) for site, entry in sorted(doc.items())
            for url in entry.get("product_urls", [])]

    def one(job):
        site, url = job
        browser = FixtureBrowser(DirectoryFetcher(fixture_root))
        return run_checkout_flow(url, browser, store, site=site).outcome

    with ThreadPoolExecutor(max_workers=workers) as pool:
        outcomes = list(pool.map(one, jobs))
    click.echo(f"{len(jobs)} sessions: " + json.dumps({o: outcomes.count(o) for o in set(outcomes)}))


@main.command("cluster")
@click.option("--segments", "segments_dir", required=True, type=click.Path(exists=True))
@click.option("--min-df", default=100, show_default=True)
@click.option("--min-cluster-size", default=10, show_default=True)
@click.option("--metric", type=click.Choice(["l1", "l2"]), default="l2", show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path())
def cluster_cmd(segments_dir, min_df, min_cluster_size, metric, out_dir):
    from darkscope.cluster import ClusterParams, run_clustering
    from darkscope.segmenter import read_segment_records

    segments = []
    for path in sorted(Path(segments_dir).glob("*.ndjson")):
        segments.extend(read_segment_records(path))
    if not segments:
        raise click.UsageError(f"no segment records under {segments_dir}")
    result = run_clustering(segments, min_df=min_df,
                            params=ClusterParams(min_cluster_size, metric))
    result.write(out_dir)
    click.echo(f"{result.assignment.n_clusters} clusters over "
               f"{len(result.normalized)} unique segments -> {out_dir}")


@main.command("monitor")
@click.option("--targets", "targets_path", required=True, type=click.Path(exists=True),
              help="One page URL per line.")
@click.option("--interval", default="4h", show_default=True)
@click.option("--duration", default="5d", show_default=True)
@click.option("--out", "store_root", required=True, type=click.Path())
@click.option("--host-map", "host_map_path", type=click.Path(exists=True), required=True,
              help='JSON {"host": ["127.0.0.1", port]} pointing at a fixture server.')
def monitor_cmd(targets_path, interval, duration, store_root, host_map_path):
    from darkscope.monitor.run import run_monitor
    from darkscope.monitor.schedule import MonitorSchedule
    from darkscope.store import SnapshotStore

    targets = [l.strip() for l in Path(targets_path).read_text().splitlines() if l.strip()]
    host_map = {k: (v[0], int(v[1])) for k, v in json.loads(Path(host_map_path).read_text()).items()}
    schedule = MonitorSchedule(parse_duration(interval), parse_duration(duration), tuple(targets))
    results = run_monitor(targets, SnapshotStore(store_root), host_map, schedule, sleep=time.sleep)
    for target, verdicts in results.items():
        for v in verdicts:
            click.echo(f"{target}\t{v.pattern_kind}\t{v.rule}\t{v.verdict}")


@main.command("attribute")
@click.option("--store", "store_root", required=True, type=click.Path(exists=True))
@click.option("--registry", "registry_path", type=click.Path(exists=True), default=None)
def attribute_cmd(store_root, registry_path):
    from darkscope.browser.har import read_har
    from darkscope.monitor.activity import extract_activity_pairs
    from darkscope.monitor.attribution import attribute_third_party, entity_prevalence, load_entity_registry
    from darkscope.store import SnapshotStore

    store = SnapshotStore(store_root)
    registry = load_entity_registry(registry_path)
    session_sites = {}
    for row in store.read_index("sessions"):
        for snap_id in row.get("snapshot_ids", []):
            session_sites[snap_id] = row["site"]
    segments_by_snapshot: dict[str, list[str]] = {}
    for row in store.read_index("segments"):
        segments_by_snapshot.setdefault(row["snapshot_id"], []).append(row["inner_text"])

    archives = []
    for row in store.read_index("snapshots"):
        site = session_sites.get(row["snapshot_id"])
        if site is None:
            continue
        har_doc = read_har(store.get_blob(row["har_ref"]))
        archives.append((site, har_doc))
        pairs = []
        for text in segments_by_snapshot.get(row["snapshot_id"], []):
            pairs.extend(extract_activity_pairs(text))
        for endpoint, entity in attribute_third_party(pairs, har_doc, registry,
                                                      first_party_domain=site):
            click.echo(f"{site}\t{endpoint}\t{entity.name if entity else 'unknown'}")
    counts = entity_prevalence(archives, registry)
    for name, count in sorted(counts.items(), key=lambda kv: (-kv[1], kv[0])):
        if count:
            click.echo(f"prevalence\t{name}\t{count}")


@main.command("report")
@click.option("--store", "store_root", required=True, type=click.Path(exists=True))
@click.pass_obj
def report_cmd(config, store_root):
    from darkscope.pipeline import Pipeline

    config.store_root = Path(store_root)
    with Pipeline(config) as pipeline:
        report = pipeline.stage_report()
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command("run")
@click.option("--stages", default=None, help="Comma-separated subset, e.g. corpus,discover.")
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.pass_obj
def run_cmd(config, stages, store_root):
    from darkscope.pipeline import Pipeline

    config.store_root = _store_root(config, store_root)
    chosen = [s.strip() for s in stages.split(",")] if stages else None
    with Pipeline(config) as pipeline:
        reports = pipeline.run(chosen)
    click.echo(json.dumps(reports, indent=2, sort_keys=True))


@main.command("serve")
@click.option("--store", "store_root", type=click.Path(), default=None)
@click.option("--port", type=int, default=None)
@click.option("--frontend", "frontend_dir", type=click.Path(), default=None,
              help="Directory with built console assets (index.html).")
@click.pass_obj
def serve_cmd(config, store_root, port, frontend_dir):
    import errno
    import uvicorn
    from darkscope.service import create_app

    root = _store_root(config, store_root)
    app = create_app(root, frontend_dir)
    try:
        uvicorn.run(app, host=config.service_host, port=port or config.service_port,
                    log_level="warning")
    except OSError as exc:
        if exc.errno == errno.EADDRINUSE:
            raise click.ClickException(
                f"port {port or config.service_port} is already in use") from exc
        raise


if __name__ == "__main__":
    main()
