"""Taxonomy registry and the labeled-instance store."""

from __future__ import annotations

import hashlib
from importlib import resources

import pytest

from darkscope.taxonomy.instances import (
    DuplicateInstanceError,
    EvidenceError,
    InstanceStore,
    PatternInstance,
)
from darkscope.taxonomy.registry import TAXONOMY_SHA256, TaxonomyError, load_taxonomy

EXPECTED_TYPES = {
    "Sneak into Basket": "Sneaking",
    "Hidden Costs": "Sneaking",
    "Hidden Subscription": "Sneaking",
    "Countdown Timer": "Urgency",
    "Limited-time Message": "Urgency",
    "Confirmshaming": "Misdirection",
    "Visual Interference": "Misdirection",
    "Trick Questions": "Misdirection",
    "Pressured Selling": "Misdirection",
    "Activity Message": "Social Proof",
    "Testimonials": "Social Proof",
    "Low-stock Message": "Scarcity",
    "High-demand Message": "Scarcity",
    "Hard to Cancel": "Obstruction",
    "Forced Enrollment": "Forced Action",
}

EXPECTED_CATEGORIES = (
    "Sneaking", "Urgency", "Misdirection", "Social Proof",
    "Scarcity", "Obstruction", "Forced Action",
)

# (asymmetric, covert, deceptive, hides_info, restrictive) per type
EXPECTED_CHARACTERISTICS = {
    "Sneak into Basket": ("never", "never", "sometimes", "always", "never"),
    "Hidden Costs": ("never", "never", "sometimes", "always", "never"),
    "Hidden Subscription": ("never", "never", "sometimes", "always", "never"),
    "Countdown Timer": ("never", "sometimes", "sometimes", "never", "never"),
    "Limited-time Message": ("never", "sometimes", "never", "always", "never"),
    "Confirmshaming": ("always", "never", "never", "never", "never"),
    "Visual Interference": ("sometimes", "always", "sometimes", "never", "never"),
    "Trick Questions": ("always", "always", "never", "never", "never"),
    "Pressured Selling": ("sometimes", "sometimes", "never", "never", "never"),
    "Activity Message": ("never", "sometimes", "sometimes", "never", "never"),
    "Testimonials": ("never", "never", "sometimes", "never", "never"),
    "Low-stock Message": ("never", "sometimes", "sometimes", "sometimes", "never"),
    "High-demand Message": ("never", "sometimes", "never", "never", "never"),
    "Hard to Cancel": ("never", "never", "never", "sometimes", "always"),
    "Forced Enrollment": ("always", "never", "never", "never", "always"),
}

EXPECTED_BIASES = {
    "Sneak into Basket": ("Default Effect",),
    "Hidden Costs": ("Sunk Cost Fallacy",),
    "Hidden Subscription": (),
    "Countdown Timer": ("Scarcity Bias",),
    "Limited-time Message": ("Scarcity Bias",),
    "Confirmshaming": ("Framing Effect",),
    "Visual Interference": ("Anchoring Effect", "Framing Effect"),
    "Trick Questions": ("Default Effect", "Framing Effect"),
    "Pressured Selling": ("Anchoring Effect", "Default Effect", "Scarcity Bias"),
    "Activity Message": ("Bandwagon Effect",),
    "Testimonials": ("Bandwagon Effect",),
    "Low-stock Message": ("Scarcity Bias",),
    "High-demand Message": ("Scarcity Bias",),
    "Hard to Cancel": (),
    "Forced Enrollment": (),
}


class TestRegistry:
    def test_fifteen_types_seven_categories(self):
        registry = load_taxonomy()
        assert len(registry) == 15
        assert registry.categories == EXPECTED_CATEGORIES
        assert set(registry.type_names()) == set(EXPECTED_TYPES)
        for name, category in EXPECTED_TYPES.items():
            assert registry.get(name).category == category

    def test_characteristic_vectors(self):
        registry = load_taxonomy()
        dims = ("asymmetric", "covert", "deceptive", "hides_info", "restrictive")
        for name, expected in EXPECTED_CHARACTERISTICS.items():
            got = tuple(registry.get(name).characteristics[d] for d in dims)
            assert got == expected, name

    def test_bias_lists(self):
        registry = load_taxonomy()
        for name, expected in EXPECTED_BIASES.items():
            assert registry.get(name).biases == expected, name

    def test_confirmshaming_row(self):
        t = load_taxonomy().get("Confirmshaming")
        assert t.category == "Misdirection"
        assert t.characteristic("asymmetric") == "always"
        assert t.characteristic("covert") == "never"
        assert t.biases == ("Framing Effect",)

    def test_hard_to_cancel_row(self):
        t = load_taxonomy().get("Hard to Cancel")
        assert t.characteristic("restrictive") == "always"
        assert t.biases == ()

    def test_unknown_type_lookup(self):
        with pytest.raises(TaxonomyError):
            load_taxonomy().get("Bait and Switch")

    def test_checksum_matches_bundled_file(self):
        raw = resources.files("darkscope.data").joinpath("taxonomy.json").read_bytes()
        assert hashlib.sha256(raw).hexdigest() == TAXONOMY_SHA256
        assert load_taxonomy().checksum == TAXONOMY_SHA256

    def test_tampered_data_refused(self):
        raw = resources.files("darkscope.data").joinpath("taxonomy.json").read_bytes()
        with pytest.raises(TaxonomyError, match="checksum"):
            load_taxonomy(raw.replace(b"Confirmshaming", b"Confirmshame!!"))


class TestInstanceStore:
    @pytest.fixture
    def instance_store(self, tmp_path):
        refs = {"seg-1", "seg-2", "shot-1"}
        return InstanceStore(tmp_path / "labels.ndjson", load_taxonomy(),
                             resolver=refs.__contains__)

    def _inst(self, seg="seg-1", site="a.example", kind="Confirmshaming"):
        return PatternInstance(site=site, pattern_type=kind, segment_refs=[seg],
                               screenshot_refs=["shot-1"], labeler="coder-a")

    def test_register_returns_id_and_counts(self, instance_store):
        instance_id = instance_store.register(self._inst())
        assert instance_id.startswith("inst-")
        assert len(instance_store) == 1

    def test_duplicate_triple_rejected(self, instance_store):
        instance_store.register(self._inst())
        with pytest.raises(DuplicateInstanceError):
            instance_store.register(self._inst())
        # same site+type with different evidence is a new instance
        instance_store.register(self._inst(seg="seg-2"))
        assert len(instance_store) == 2

    def test_dangling_evidence_rejected(self, instance_store):
        with pytest.raises(EvidenceError):
            instance_store.register(self._inst(seg="seg-404"))

    def test_unknown_type_rejected(self, instance_store):
        with pytest.raises(EvidenceError):
            instance_store.register(self._inst(kind="Nagging"))

    def test_replay_and_tombstones(self, tmp_path):
        path = tmp_path / "labels.ndjson"
        store = InstanceStore(path, load_taxonomy())
        kept = store.register(self._inst())
        gone = store.register(self._inst(seg="seg-2"))
        store.delete(gone)

        replayed = InstanceStore(path, load_taxonomy())
        ids = [i.instance_id for i in replayed.all()]
        assert ids == [kept]
        # the log itself still holds every event for replayability
        assert len(path.read_text().splitlines()) == 3
