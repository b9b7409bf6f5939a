"""Inline-style parsing and color handling for the fixture browser."""

from __future__ import annotations

import re

NAMED_COLORS = {
    "black": (0, 0, 0),
    "white": (255, 255, 255),
    "red": (255, 0, 0),
    "green": (0, 128, 0),
    "blue": (0, 0, 255),
    "yellow": (255, 255, 0),
    "orange": (255, 165, 0),
    "purple": (128, 0, 128),
    "gray": (128, 128, 128),
    "grey": (128, 128, 128),
    "silver": (192, 192, 192),
    "crimson": (220, 20, 60),
    "tomato": (255, 99, 71),
    "gold": (255, 215, 0),
    "navy": (0, 0, 128),
    "teal": (0, 128, 128),
    "transparent": None,
}

_RGB_RE = re.compile(r"rgba?\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)")
_PX_RE = re.compile(r"(-?\d+(?:\.\d+)?)\s*px\s*$")


def parse_style(style_attr: str | None) -> dict[str, str]:
    if not style_attr:
        return {}
    out = {}
    for part in style_attr.split(";"):
        if ":" not in part:
            continue
        key, _, value = part.partition(":")
        out[key.strip().lower()] = value.strip()
    return out


def parse_color(value: str | None) -> tuple[int, int, int] | None:
    """Returns (r, g, b) or None for transparent/unparsable."""
    if not value:
        return None
    value = value.strip().lower()
    if value in NAMED_COLORS:
        return NAMED_COLORS[value]
    if value.startswith("#"):
        hexpart = value[1:]
        if len(hexpart) == 3:
            hexpart = "".join(c * 2 for c in hexpart)
        if len(hexpart) == 6:
            try:
                return tuple(int(hexpart[i : i + 2], 16) for i in (0, 2, 4))  # type: ignore[return-value]
            except ValueError:
                return None
    m = _RGB_RE.match(value)
    if m:
        return tuple(min(255, int(g)) for g in m.groups())  # type: ignore[return-value]
    return None


def format_rgb(rgb: tuple[int, int, int]) -> str:
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def parse_px(value: str | None) -> float | None:
    if not value:
        return None
    m = _PX_RE.match(value.strip())
    return float(m.group(1)) if m else None
