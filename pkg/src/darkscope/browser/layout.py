"""Deterministic box layout for fixture pages.

The model is intentionally small so fixture traces stay hand-checkable:

- every element lays out as a stacked block inside its parent's content box;
- width comes from `style="width:..px"` else the parent width;
- height comes from `style="height:..px"` else content height, where each
  non-whitespace text node contributes one 20 px line;
- `position:absolute` with `left`/`top` places a box at document coordinates
  and removes it from normal flow;
- `display:none` subtrees and non-rendered tags (head, script, style, ...)
  get no box.

Margins, padding, floats, and inline flow are out of scope; fixtures use
explicit sizes where geometry matters.
"""

from __future__ import annotations

from dataclasses import dataclass

from darkscope.browser.dom import DomElement, TextNode
from darkscope.browser.style import parse_px, parse_style

LINE_HEIGHT = 20.0
NON_RENDERED_TAGS = {"head", "script", "style", "noscript", "meta", "link", "title", "template"}


@dataclass(frozen=True)
class Box:
    x: float
    y: float
    width: float
    height: float

    @property
    def right(self) -> float:
        return self.x + self.width

    @property
    def bottom(self) -> float:
        return self.y + self.height

    def intersects(self, other: "Box") -> bool:
        return (
            self.x < other.right
            and self.right > other.x
            and self.y < other.bottom
            and self.bottom > other.y
        )


@dataclass
class LayoutResult:
    boxes: dict[int, Box]  # node_id -> box
    document: Box

    def box(self, el: DomElement) -> Box | None:
        return self.boxes.get(el.node_id)


def compute_layout(root: DomElement, viewport_width: float = 1280.0) -> LayoutResult:
    boxes: dict[int, Box] = {}

    def layout(el: DomElement, x: float, y: float, avail_width: float) -> float:
        """Lay out `el` at (x, y); returns the height consumed in normal flow."""
        style = parse_style(el.attr("style"))
        if el.tag in NON_RENDERED_TAGS or style.get("display") == "none":
            return 0.0

        absolute = style.get("position") == "absolute"
        if absolute:
            x = parse_px(style.get("left")) or 0.0
            y = parse_px(style.get("top")) or 0.0

        width = parse_px(style.get("width"))
        if width is None:
            width = avail_width
        explicit_height = parse_px(style.get("height"))

        cursor = y
        content_height = 0.0
        for child in el.children:
            if isinstance(child, TextNode):
                if child.text.strip():
                    content_height += LINE_HEIGHT
                    cursor += LINE_HEIGHT
                continue
            consumed = layout(child, x, cursor, width)
            content_height += consumed
            cursor += consumed

        height = explicit_height if explicit_height is not None else content_height
        boxes[el.node_id] = Box(x, y, width, height)
        return 0.0 if absolute else height

    root_style = parse_style(root.attr("style"))
    root_width = parse_px(root_style.get("width")) or viewport_width
    layout(root, 0.0, 0.0, root_width)

    root_box = boxes.get(root.node_id, Box(0, 0, root_width, 0))
    doc_w = max(root_width, max((b.right for b in boxes.values()), default=0.0))
    doc_h = max(root_box.height, max((b.bottom for b in boxes.values()), default=0.0))
    return LayoutResult(boxes=boxes, document=Box(0.0, 0.0, doc_w, max(doc_h, 1.0)))
