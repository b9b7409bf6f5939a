"""Category classification: fixture client, disk cache, degradation."""

from __future__ import annotations

from darkscope.corpus.build import build_corpus, read_corpus_file
from darkscope.corpus.classify import CategoryCache, FixtureCategoryClient, classify_sites
from darkscope.corpus.ingest import ingest_ranked_list
from darkscope.corpus.records import Category


def _records(*domains):
    records, _ = ingest_ranked_list(list(domains))
    return records


class TestClassifySites:
    def test_fixture_passthrough(self):
        client = FixtureCategoryClient({"a.com": "shopping"})
        out = classify_sites(_records("a.com"), client, workers=1)
        assert out[0].category == Category.SHOPPING

    def test_client_failure_leaves_unknown_and_continues(self):
        client = FixtureCategoryClient({"a.com": "shopping", "c.com": "shopping"},
                                       failing={"b.com"})
        out = classify_sites(_records("a.com", "b.com", "c.com"), client, workers=1)
        assert [r.category for r in out] == ["shopping", "unknown", "shopping"]

    def test_warm_cache_makes_zero_client_calls(self, tmp_path):
        cache_path = tmp_path / "cache.tsv"
        mapping = {"a.com": "shopping", "b.com": "not-shopping"}
        first = FixtureCategoryClient(mapping)
        classify_sites(_records("a.com", "b.com"), first,
                       cache=CategoryCache(cache_path), workers=1)
        assert first.calls == 2

        second = FixtureCategoryClient(mapping)
        out = classify_sites(_records("a.com", "b.com"), second,
                             cache=CategoryCache(cache_path), workers=1)
        assert second.calls == 0
        assert [r.category for r in out] == ["shopping", "not-shopping"]

    def test_rank_order_preserved_with_workers(self):
        client = FixtureCategoryClient({f"s{i}.com": "shopping" for i in range(20)})
        records = _records(*[f"s{i}.com" for i in range(20)])
        out = classify_sites(records, client, workers=6)
        assert [r.domain for r in out] == [r.domain for r in records]


class TestCorpusDeterminism:
    def _build(self, tmp_path, name):
        list_path = tmp_path / "list.csv"
        list_path.write_text("1,a.com\n2,b.com\n3,c.com\n", encoding="utf-8")
        client = FixtureCategoryClient({"a.com": "shopping", "b.com": "shopping",
                                        "c.com": "not-shopping"})
        texts = {
            "a.com": "add your items to the cart and check out with free shipping today",
            "b.com": "Willkommen in unserem Geschäft mit kostenlosem Versand für alle Bestellungen",
        }
        out = tmp_path / name

        def homepage_text(domain):
            return texts.get(domain, "")

        build_corpus(list_path, client, homepage_text, out, workers=1)
        return out.read_bytes()

    def test_two_runs_byte_identical(self, tmp_path):
        assert self._build(tmp_path, "one.tsv") == self._build(tmp_path, "two.tsv")

    def test_corpus_file_round_trip(self, tmp_path):
        self._build(tmp_path, "c.tsv")
        records = read_corpus_file(tmp_path / "c.tsv")
        assert [r.domain for r in records] == ["a.com"]
        assert records[0].language == "en"
