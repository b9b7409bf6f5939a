"""Third-party attribution of activity notifications via archive search.

If a third party rendered the notification, its (name, location) tokens must
appear in some HTTP response it served. Searching archived response bodies
for both tokens yields the originating endpoint; first-party responses are
excluded because server-side generation gives no insight into the provider.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable

from darkscope.browser.har import entry_body, entry_url, iter_entries
from darkscope.errors import StoreIntegrityError
from darkscope.finder.discover import registrable_domain
from urllib.parse import urlsplit


@dataclass(frozen=True)
class ThirdPartyEntity:
    name: str
    domains: frozenset[str]
    additional_patterns: tuple[str, ...] = ()
    provisional: bool = True

    def __post_init__(self):
        if not self.domains:
            raise ValueError(f"entity {self.name!r} has no domains")


@dataclass
class EntityRegistry:
    entities: list[ThirdPartyEntity] = field(default_factory=list)

    def by_domain(self, domain: str) -> ThirdPartyEntity | None:
        domain = registrable_domain(domain)
        for entity in self.entities:
            if domain in entity.domains:
                return entity
        return None

    def names(self) -> list[str]:
        return [e.name for e in self.entities]


def load_entity_registry(path: str | Path | None = None) -> EntityRegistry:
    if path is None:
        text = resources.files("darkscope.data").joinpath("third_party_entities.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text(encoding="utf-8")
    entities = []
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) < 2:
            continue
        name, domains = parts[0], parts[1]
        tags = tuple(t for t in (parts[2] if len(parts) > 2 else "-").split(",") if t and t != "-")
        status = parts[3] if len(parts) > 3 else "provisional"
        entities.append(
            ThirdPartyEntity(
                name=name,
                domains=frozenset(registrable_domain(d.strip()) for d in domains.split(",") if d.strip()),
                additional_patterns=tags,
                provisional=(status == "provisional"),
            )
        )
    return EntityRegistry(entities)


def _document_domain(har_doc: dict) -> str:
    for entry in iter_entries(har_doc):
        host = urlsplit(entry_url(entry)).hostname or ""
        if host:
            return registrable_domain(host)
    return ""


def attribute_third_party(
    pairs: list[tuple[str, str]],
    har_doc: dict,
    registry: EntityRegistry,
    first_party_domain: str | None = None,
) -> list[tuple[str, ThirdPartyEntity | None]]:
    """Map each (name, location) pair to the endpoint that served it.

    Returns (registrable endpoint domain, entity or None-for-unknown) for
    pairs found in third-party response bodies. Pairs served only first-party
    or absent from the archive yield nothing.
    """
    if not isinstance(har_doc, dict) or "log" not in har_doc:
        raise StoreIntegrityError("unreadable HTTP archive")
    first_party = first_party_domain or _document_domain(har_doc)
    results: list[tuple[str, ThirdPartyEntity | None]] = []
    seen: set[tuple[str, str, str]] = set()
    for name, location in pairs:
        for entry in iter_entries(har_doc):
            body = entry_body(entry)
            if name not in body or location not in body:
                continue
            host = urlsplit(entry_url(entry)).hostname or ""
            endpoint = registrable_domain(host)
            if not endpoint or endpoint == first_party:
                continue
            key = (name, location, endpoint)
            if key in seen:
                continue
            seen.add(key)
            results.append((endpoint, registry.by_domain(endpoint)))
    return results


def entity_prevalence(
    site_archives: Iterable[tuple[str, dict]],
    registry: EntityRegistry,
) -> dict[str, int]:
    """Per-entity count of distinct sites whose archives hit an entity domain.

    Every registry entity is listed, zero-hit ones included.
    """
    hits: dict[str, set[str]] = {e.name: set() for e in registry.entities}
    for site, har_doc in site_archives:
        for entry in iter_entries(har_doc):
            host = urlsplit(entry_url(entry)).hostname or ""
            if not host:
                continue
            entity = registry.by_domain(host)
            if entity is not None:
                hits[entity.name].add(site)
    return {name: len(sites) for name, sites in hits.items()}
