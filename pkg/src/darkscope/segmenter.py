"""Page segmentation into visible text-bearing block units.

The recursive rules walk the rendered tree top-down. A block-tag element
with no visible block structure inside is a segment candidate; oversized
candidates (more than 30% of the document's scrollable area) recurse into
their children instead. Non-block elements recurse when they wrap block
structure and are otherwise emitted whole. Emitted elements are then kept
only if they carry at least one non-whitespace character of rendered text.

Mutation handling re-runs the same walk on each changed subtree root and
suppresses segments already emitted for the page, keyed by the
(tag, text, box) triple.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable

from darkscope.browser.dom import DomElement, TextNode
from darkscope.browser.page import Page, collapse_ws
from darkscope.browser.session import MutationBatch
from darkscope.browser.style import format_rgb

IGNORED_TAGS = ("script", "style", "noscript", "br", "hr")
BLOCK_TAGS = (
    "div", "section", "article", "aside", "nav", "header",
    "footer", "main", "form", "fieldset", "table",
)
PAGE_AREA_FRACTION = 0.30

SEGMENT_FIELDS = (
    "tag_name", "inner_text", "bounding_box", "text_color",
    "background_color", "page_url", "origin", "captured_at",
)


@dataclass(frozen=True)
class Segment:
    tag_name: str
    inner_text: str
    bounding_box: tuple[float, float, float, float]  # x, y, width, height
    text_color: str
    background_color: str
    page_url: str
    origin: str  # initial | mutation
    captured_at: float

    def key(self) -> tuple:
        return (self.tag_name, self.inner_text, self.bounding_box)

    def record_id(self) -> str:
        import hashlib

        raw = f"{self.page_url}|{self.tag_name}|{self.inner_text}|{self.bounding_box}"
        return "seg-" + hashlib.sha1(raw.encode("utf-8")).hexdigest()[:16]

    def to_record(self) -> dict:
        return {
            "tag_name": self.tag_name,
            "inner_text": self.inner_text,
            "bounding_box": {
                "x": self.bounding_box[0],
                "y": self.bounding_box[1],
                "width": self.bounding_box[2],
                "height": self.bounding_box[3],
            },
            "text_color": self.text_color,
            "background_color": self.background_color,
            "page_url": self.page_url,
            "origin": self.origin,
            "captured_at": self.captured_at,
        }

    @classmethod
    def from_record(cls, rec: dict) -> "Segment":
        bb = rec["bounding_box"]
        return cls(
            tag_name=rec["tag_name"],
            inner_text=rec["inner_text"],
            bounding_box=(bb["x"], bb["y"], bb["width"], bb["height"]),
            text_color=rec["text_color"],
            background_color=rec["background_color"],
            page_url=rec["page_url"],
            origin=rec["origin"],
            captured_at=rec["captured_at"],
        )


def _bigger_than_one_px(page: Page, el: DomElement) -> bool:
    box = page.box(el)
    return box is not None and box.width > 1.0 and box.height > 1.0


def _occupies_over_page_fraction(page: Page, el: DomElement) -> bool:
    box = page.box(el)
    if box is None:
        return False
    doc = page.document_box
    doc_area = doc.width * doc.height
    if doc_area <= 0:
        return False
    return (box.width * box.height) / doc_area > PAGE_AREA_FRACTION


def _contains_visible_block(page: Page, el: DomElement) -> bool:
    for descendant in el.iter():
        if descendant is el:
            continue
        if descendant.tag in BLOCK_TAGS and page.is_visible(descendant):
            return True
    return False


def _has_direct_text(el: DomElement) -> bool:
    return any(t.text.strip() for t in el.text_nodes())


def _children_all_ignored(el: DomElement) -> bool:
    # Whitespace-only text children are treated as absent.
    if _has_direct_text(el):
        return False
    return all(c.tag in IGNORED_TAGS for c in el.element_children())


def _walk(page: Page, el: DomElement) -> list[DomElement]:
    if el is None:
        return []
    tag = el.tag
    if tag in IGNORED_TAGS or not page.is_visible(el) or not _bigger_than_one_px(page, el):
        return []

    def recurse_children() -> list[DomElement]:
        out: list[DomElement] = []
        for child in el.element_children():
            out.extend(_walk(page, child))
        return out

    if tag in BLOCK_TAGS:
        if not _contains_visible_block(page, el):
            if _children_all_ignored(el):
                return []
            if _occupies_over_page_fraction(page, el):
                return recurse_children()
            return [el]
        if _has_direct_text(el):
            return [el]
        return recurse_children()

    if any(c.tag in BLOCK_TAGS for c in el.element_children()):
        return recurse_children()
    if _occupies_over_page_fraction(page, el):
        return recurse_children()
    return [el]


class PageSegmenter:
    """Per-page segmentation with duplicate suppression across mutations."""

    def __init__(self, page: Page, now: float = 0.0):
        self.page = page
        self._emitted: set[tuple] = set()
        self._now = now

    def _materialize(self, el: DomElement, origin: str, captured_at: float) -> Segment | None:
        text = self.page.inner_text(el)
        if not text:
            return None
        box = self.page.box(el)
        if box is None:
            return None
        return Segment(
            tag_name=el.tag,
            inner_text=text,
            bounding_box=(box.x, box.y, box.width, box.height),
            text_color=format_rgb(self.page.text_color(el)),
            background_color=format_rgb(self.page.background_color(el)),
            page_url=self.page.url,
            origin=origin,
            captured_at=captured_at,
        )

    def _collect(self, root: DomElement, origin: str, captured_at: float) -> list[Segment]:
        segments = []
        for el in _walk(self.page, root):
            seg = self._materialize(el, origin, captured_at)
            if seg is None or seg.key() in self._emitted:
                continue
            self._emitted.add(seg.key())
            segments.append(seg)
        return segments

    def segment_page(self, captured_at: float | None = None) -> list[Segment]:
        if self.page.root.parent is not None:
            return []
        return self._collect(self.page.root, "initial", captured_at if captured_at is not None else self._now)

    def on_mutation_batch(self, batch: MutationBatch, captured_at: float | None = None) -> list[Segment]:
        out: list[Segment] = []
        ts = captured_at if captured_at is not None else self._now
        for root in batch.roots:
            if not root.is_attached(self.page.root):
                continue
            out.extend(self._collect(root, "mutation", ts))
        return out


def segment_page(page: Page, captured_at: float = 0.0) -> list[Segment]:
    """One-shot segmentation of a settled page."""
    return PageSegmenter(page).segment_page(captured_at)


# -- record file IO -----------------------------------------------------------

def write_segment_records(segments: Iterable[Segment], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as fh:
        for seg in segments:
            fh.write(json.dumps(seg.to_record(), sort_keys=False) + "\n")


def append_segment_records(segments: Iterable[Segment], path: str | Path) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        for seg in segments:
            fh.write(json.dumps(seg.to_record(), sort_keys=False) + "\n")


def read_segment_records(path: str | Path) -> list[Segment]:
    segments = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if line.strip():
            segments.append(Segment.from_record(json.loads(line)))
    return segments
