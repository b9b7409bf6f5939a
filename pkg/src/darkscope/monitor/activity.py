"""Activity-notification mining: (name, location) pair extraction.

Limited to Latin-script capitalized tokens; messages that carry counts but no
personal pair ("35 people added this item to cart") yield nothing, matching
the server-side cases the attribution step must ignore.
"""

from __future__ import annotations

import re

# "Abigail from Michigan ...", "Jane from Washington, DC ..."
_PAIR_RE = re.compile(
    r"\b([A-Z][a-z]+)\s+from\s+"
    r"([A-Z][a-z]+(?:\s+[A-Z][a-z]+)*(?:,\s*[A-Z]{2,3})?)"
)


def extract_activity_pairs(text: str) -> list[tuple[str, str]]:
    return [(m.group(1), m.group(2)) for m in _PAIR_RE.finditer(text)]
