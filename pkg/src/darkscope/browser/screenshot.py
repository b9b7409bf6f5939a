"""Lossless raster rendering of fixture pages.

Paints each visible element's box (background fill, light border) and its own
text, top-down so children overlay parents. Output is a deterministic PNG.
"""

from __future__ import annotations

import io

from PIL import Image, ImageDraw

from darkscope.browser.page import Page, collapse_ws

MAX_DIM = 4000


def render_png(page: Page) -> bytes:
    doc = page.document_box
    width = int(min(max(doc.width, 1), MAX_DIM))
    height = int(min(max(doc.height, 1), MAX_DIM))
    image = Image.new("RGB", (width, height), (255, 255, 255))
    draw = ImageDraw.Draw(image)

    for el in page.root.iter():
        if not page.is_visible(el):
            continue
        box = page.box(el)
        if box is None:
            continue
        x0, y0 = int(box.x), int(box.y)
        x1, y1 = int(box.right) - 1, int(box.bottom) - 1
        if x1 < x0 or y1 < y0 or x0 > width or y0 > height:
            continue
        style = page.style(el)
        if style.get("background-color") or style.get("background"):
            draw.rectangle([max(x0, 0), max(y0, 0), min(x1, width - 1), min(y1, height - 1)],
                           fill=page.background_color(el))
        draw.rectangle([max(x0, 0), max(y0, 0), min(x1, width - 1), min(y1, height - 1)],
                       outline=(220, 220, 220))
        own_text = collapse_ws("".join(t.text for t in el.text_nodes()))
        if own_text:
            draw.text((x0 + 2, y0 + 2), own_text[:120], fill=page.text_color(el))

    buf = io.BytesIO()
    image.save(buf, format="PNG")
    return buf.getvalue()
