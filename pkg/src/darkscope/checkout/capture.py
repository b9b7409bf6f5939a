"""Snapshot capture: page source, screenshot, and HTTP archive, atomically."""

from __future__ import annotations

import hashlib
import logging
import struct
from dataclasses import dataclass, field

from darkscope.browser.har import har_bytes
from darkscope.browser.screenshot import render_png
from darkscope.browser.session import FixtureBrowser
from darkscope.errors import PreconditionError
from darkscope.store import SnapshotStore

log = logging.getLogger(__name__)

TRIGGERS = ("load", "click", "option_select", "mutation")


@dataclass
class Snapshot:
    snapshot_id: str
    session_ref: str
    trigger: str
    page_source: str
    source_ref: str
    screenshot_ref: str | None
    har_ref: str
    captured_at: float
    warning: str = ""

    def to_record(self) -> dict:
        return {
            "snapshot_id": self.snapshot_id,
            "session_ref": self.session_ref,
            "trigger": self.trigger,
            "source_ref": self.source_ref,
            "screenshot_ref": self.screenshot_ref,
            "har_ref": self.har_ref,
            "captured_at": self.captured_at,
            "warning": self.warning,
        }


def snapshot_id_for(page_source: str, captured_at: float) -> str:
    h = hashlib.sha256()
    h.update(page_source.encode("utf-8"))
    h.update(struct.pack("<d", captured_at))
    return "snap-" + h.hexdigest()[:16]


def capture_snapshot(
    browser: FixtureBrowser,
    trigger: str,
    store: SnapshotStore,
    session_ref: str,
) -> Snapshot:
    """Persist source + screenshot + HAR for the current page state.

    Requires a settled page. Screenshot failure degrades to source + HAR
    with a warning flag rather than aborting the flow.
    """
    if trigger not in TRIGGERS:
        raise ValueError(f"unknown snapshot trigger: {trigger!r}")
    if not browser.settled:
        raise PreconditionError("page load has not settled")

    page = browser.current_page
    page_source = page.source()
    if not page_source.strip():
        raise PreconditionError("empty page source")
    captured_at = browser.clock.now()

    source_ref = store.put_blob(page_source.encode("utf-8"), "src")
    har_ref = store.put_blob(har_bytes(browser.har_entries), "har")

    screenshot_ref: str | None = None
    warning = ""
    try:
        screenshot_ref = store.put_blob(render_png(page), "shot")
    except Exception as exc:  # degrade, never abort the flow
        warning = f"screenshot failed: {exc}"
        log.warning("%s (page %s)", warning, page.url)

    snap = Snapshot(
        snapshot_id=snapshot_id_for(page_source, captured_at),
        session_ref=session_ref,
        trigger=trigger,
        page_source=page_source,
        source_ref=source_ref,
        screenshot_ref=screenshot_ref,
        har_ref=har_ref,
        captured_at=captured_at,
    )
    snap.warning = warning
    store.append_index("snapshots", snap.to_record())
    return snap
