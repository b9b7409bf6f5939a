"""Dark-pattern taxonomy registry.

The taxonomy ships as a bundled, checksummed data file holding 7 categories
and 15 pattern types. Each type carries a five-dimension characteristic
vector (always / sometimes / never) and the cognitive biases it exploits.
The registry is immutable after load.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources

CHARACTERISTIC_DIMENSIONS = (
    "asymmetric",
    "covert",
    "deceptive",
    "hides_info",
    "restrictive",
)

CHARACTERISTIC_VALUES = frozenset({"always", "sometimes", "never"})

# sha256 of the bundled taxonomy.json; load refuses anything else.
TAXONOMY_SHA256 = "b1e6258b50cb57aa597e7411a150d71682700a909003064587dcd4c09ca4a6c4"


class TaxonomyError(Exception):
    """Raised on checksum mismatch, malformed data, or unknown lookups."""


@dataclass(frozen=True)
class PatternType:
    name: str
    category: str
    description: str
    characteristics: dict[str, str]  # dimension -> always|sometimes|never
    biases: tuple[str, ...]

    def characteristic(self, dimension: str) -> str:
        if dimension not in CHARACTERISTIC_DIMENSIONS:
            raise TaxonomyError(f"unknown characteristic dimension: {dimension!r}")
        return self.characteristics[dimension]


class TaxonomyRegistry:
    """Immutable view over the bundled taxonomy."""

    def __init__(self, categories: list[str], biases: list[str], types: list[PatternType], checksum: str):
        self.categories = tuple(categories)
        self.biases = tuple(biases)
        self.checksum = checksum
        self._types = {t.name: t for t in types}

    @property
    def types(self) -> tuple[PatternType, ...]:
        return tuple(self._types.values())

    def type_names(self) -> tuple[str, ...]:
        return tuple(self._types)

    def get(self, name: str) -> PatternType:
        try:
            return self._types[name]
        except KeyError:
            raise TaxonomyError(f"unknown pattern type: {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self._types

    def __len__(self) -> int:
        return len(self._types)


def _validate(doc: dict) -> None:
    categories = set(doc["categories"])
    biases = set(doc["biases"])
    for entry in doc["types"]:
        if entry["category"] not in categories:
            raise TaxonomyError(f"type {entry['name']!r} has unlisted category {entry['category']!r}")
        chars = entry["characteristics"]
        if set(chars) != set(CHARACTERISTIC_DIMENSIONS):
            raise TaxonomyError(f"type {entry['name']!r} has malformed characteristic vector")
        for dim, value in chars.items():
            if value not in CHARACTERISTIC_VALUES:
                raise TaxonomyError(f"type {entry['name']!r}: bad value {value!r} for {dim!r}")
        for bias in entry["biases"]:
            if bias not in biases:
                raise TaxonomyError(f"type {entry['name']!r} has unlisted bias {bias!r}")


def load_taxonomy(raw: bytes | None = None, expected_sha256: str = TAXONOMY_SHA256) -> TaxonomyRegistry:
    """Load the registry, refusing data whose checksum does not match.

    `raw` overrides the bundled file (used by tests to prove the refusal path).
    """
    if raw is None:
        raw = resources.files("darkscope.data").joinpath("taxonomy.json").read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != expected_sha256:
        raise TaxonomyError(
            f"taxonomy data checksum mismatch: expected {expected_sha256}, got {digest}"
        )
    doc = json.loads(raw)
    _validate(doc)
    types = [
        PatternType(
            name=entry["name"],
            category=entry["category"],
            description=entry["description"],
            characteristics=dict(entry["characteristics"]),
            biases=tuple(entry["biases"]),
        )
        for entry in doc["types"]
    ]
    return TaxonomyRegistry(doc["categories"], doc["biases"], types, digest)
