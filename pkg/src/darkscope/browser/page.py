"""Rendered-page view: layout, visibility, text, and colors over a DOM tree."""

from __future__ import annotations

import re

from darkscope.browser.dom import DomElement, TextNode, serialize
from darkscope.browser.layout import Box, LayoutResult, compute_layout
from darkscope.browser.style import parse_color, parse_style
from darkscope.finder.scoring import ElementView

_WS_RE = re.compile(r"\s+")

DEFAULT_TEXT_COLOR = (0, 0, 0)
DEFAULT_BACKGROUND = (255, 255, 255)
_TEXTLESS_TAGS = {"script", "style", "noscript", "template"}


def collapse_ws(text: str) -> str:
    return _WS_RE.sub(" ", text).strip()


class Page:
    """One loaded document. Layout is recomputed lazily after mutations."""

    def __init__(self, url: str, root: DomElement, viewport_width: float = 1280.0):
        self.url = url
        self.root = root
        self.viewport_width = viewport_width
        self._layout: LayoutResult | None = None

    # -- layout -------------------------------------------------------------

    def invalidate(self) -> None:
        self._layout = None

    @property
    def layout(self) -> LayoutResult:
        if self._layout is None:
            self._layout = compute_layout(self.root, self.viewport_width)
        return self._layout

    def box(self, el: DomElement) -> Box | None:
        return self.layout.box(el)

    @property
    def document_box(self) -> Box:
        return self.layout.document

    def style(self, el: DomElement) -> dict[str, str]:
        return parse_style(el.attr("style"))

    # -- visibility -----------------------------------------------------------

    def is_displayed(self, el: DomElement) -> bool:
        node: DomElement | None = el
        while node is not None:
            if self.style(node).get("display") == "none":
                return False
            node = node.parent
        return True

    def css_hidden(self, el: DomElement) -> bool:
        node: DomElement | None = el
        while node is not None:
            if self.style(node).get("visibility") == "hidden":
                return True
            node = node.parent
        return False

    def opacity(self, el: DomElement) -> float:
        raw = self.style(el).get("opacity")
        try:
            return float(raw) if raw is not None else 1.0
        except ValueError:
            return 1.0

    def is_visible(self, el: DomElement) -> bool:
        """Spec rule: displayed, not visibility-hidden, opacity above 0.01,
        and a box larger than 1x1 px intersecting the document area."""
        if not el.is_attached(self.root):
            return False
        if not self.is_displayed(el) or self.css_hidden(el):
            return False
        if self.opacity(el) <= 0.01:
            return False
        box = self.box(el)
        if box is None or box.width <= 1.0 or box.height <= 1.0:
            return False
        return box.intersects(self.document_box)

    # -- text and colors ------------------------------------------------------

    def inner_text(self, el: DomElement) -> str:
        """Rendered text: visibility-respecting concatenation of descendant
        text nodes, whitespace collapsed."""
        parts: list[str] = []

        def walk(node: DomElement) -> None:
            if node.tag in _TEXTLESS_TAGS:
                return
            if self.style(node).get("display") == "none" or self.style(node).get("visibility") == "hidden":
                return
            for child in node.children:
                if isinstance(child, TextNode):
                    parts.append(child.text)
                else:
                    walk(child)

        if self.is_displayed(el) and not self.css_hidden(el):
            walk(el)
        return collapse_ws(" ".join(parts))

    def text_color(self, el: DomElement) -> tuple[int, int, int]:
        node: DomElement | None = el
        while node is not None:
            color = parse_color(self.style(node).get("color"))
            if color is not None:
                return color
            node = node.parent
        return DEFAULT_TEXT_COLOR

    def background_color(self, el: DomElement) -> tuple[int, int, int]:
        """Effective background: nearest ancestor-or-self with one set."""
        node: DomElement | None = el
        while node is not None:
            style = self.style(node)
            raw = style.get("background-color") or style.get("background")
            color = parse_color(raw)
            if color is not None:
                return color
            node = node.parent
        return DEFAULT_BACKGROUND

    # -- views for scoring ------------------------------------------------------

    def element_views(self) -> list[ElementView]:
        """One view per element that renders any text of its own."""
        views = []
        for el in self.root.iter():
            if el.tag in _TEXTLESS_TAGS:
                continue
            own_text = collapse_ws("".join(t.text for t in el.text_nodes()))
            if not own_text:
                continue
            box = self.box(el) or Box(0, 0, 0, 0)
            views.append(
                ElementView(
                    ref=f"node-{el.node_id}",
                    text=self.inner_text(el) or own_text,
                    x=box.x,
                    y=box.y,
                    width=box.width,
                    height=box.height,
                    background_color=self.background_color(el),
                    visible=self.is_visible(el),
                )
            )
        return views

    def element_by_ref(self, ref: str) -> DomElement | None:
        if not ref.startswith("node-"):
            return None
        node_id = int(ref.split("-", 1)[1])
        for el in self.root.iter():
            if el.node_id == node_id:
                return el
        return None

    def source(self) -> str:
        return "<!DOCTYPE html>" + serialize(self.root)
