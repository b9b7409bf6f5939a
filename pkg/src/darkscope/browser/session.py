"""Headless fixture browser.

Drives fixture pages deterministically where a WebDriver-controlled browser
would drive live sites. Dynamic behavior comes from two sources: the fetcher
(servers may answer differently per visit) and in-page `<template>` mutation
directives:

    <template data-after-ms="5000" data-op="append" data-target="#root">...</template>
    <template data-after-ms="1000" data-op="set-text" data-target="#timer">09:59</template>
    <template data-after-ms="800"  data-op="remove" data-target="#offer"></template>
    <template data-after-ms="500"  data-op="set-attr" data-target="#x"
              data-attr-name="style" data-attr-value="color:red"></template>

Time is simulated: politeness delays and load-settle waits advance a clock
without real sleeping, firing due mutations and coalescing them into batches.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from darkscope.browser.dom import DomElement, parse_fragment, parse_html, TextNode
from darkscope.browser.fetch import FetchResult
from darkscope.browser.har import entry_from_fetch
from darkscope.browser.page import Page
from darkscope.errors import InteractionError, NavigationError, PreconditionError
from darkscope.finder.scoring import ElementView
from urllib.parse import urljoin

POLITENESS_DELAY = 1.0
NETWORK_IDLE = 1.5
POPUP_GRACE = 3.0
COALESCE_MS = 200.0


class SimulatedClock:
    """Wall-clock base plus a simulated offset advanced by sleeps."""

    def __init__(self):
        self.base = time.time()
        self.offset = 0.0

    def now(self) -> float:
        return self.base + self.offset

    def sleep(self, seconds: float) -> None:
        self.offset += max(0.0, seconds)


@dataclass
class MutationBatch:
    sequence_number: int
    roots: list[DomElement]
    window_ms: float = COALESCE_MS


@dataclass
class _PendingMutation:
    due_at_ms: float
    op: str
    target_id: str | None
    content_html: str
    attr_name: str | None = None
    attr_value: str | None = None


@dataclass
class SubresourceLog:
    fetched: list[str] = field(default_factory=list)
    failed: list[str] = field(default_factory=list)


class FixtureBrowser:
    def __init__(
        self,
        fetcher,
        viewport_width: float = 1280.0,
        politeness_delay: float = POLITENESS_DELAY,
        network_idle: float = NETWORK_IDLE,
        popup_grace: float = POPUP_GRACE,
        coalesce_ms: float = COALESCE_MS,
    ):
        self.fetcher = fetcher
        self.viewport_width = viewport_width
        self.politeness_delay = politeness_delay
        self.network_idle = network_idle
        self.popup_grace = popup_grace
        self.coalesce_ms = coalesce_ms
        self.clock = SimulatedClock()
        self.page: Page | None = None
        self.har_entries: list[dict] = []
        self.subresources = SubresourceLog()
        self.settled = False
        self._pending: list[_PendingMutation] = []
        self._page_ms = 0.0
        self._batches: list[MutationBatch] = []
        self._seq = 0
        self._navigations = 0
        self.selected_options: dict[str, str] = {}

    # -- navigation ----------------------------------------------------------

    @property
    def current_url(self) -> str:
        return self.page.url if self.page else ""

    @property
    def current_page(self) -> Page:
        if self.page is None:
            raise PreconditionError("no page loaded")
        return self.page

    def elapsed(self) -> float:
        return self.clock.offset

    def goto(self, url: str) -> None:
        if self._navigations > 0 and self.politeness_delay:
            self.clock.sleep(self.politeness_delay)
        result = self.fetcher.fetch(url)  # NavigationError propagates
        self._navigations += 1
        root = parse_html(result.text)
        self.page = Page(result.url, root, self.viewport_width)
        self.har_entries = [entry_from_fetch(result)]
        self.subresources = SubresourceLog()
        self._fetch_subresources(root, result.url)
        self.settled = False
        self._page_ms = 0.0
        self._batches = []
        self._seq = 0
        self.selected_options = {}
        self._collect_templates(root)

    def _fetch_subresources(self, root: DomElement, base_url: str) -> None:
        targets: list[str] = []
        for el in root.iter():
            if el.tag == "script" and el.attr("src"):
                targets.append(el.attr("src"))  # type: ignore[arg-type]
            elif el.tag == "img" and el.attr("src"):
                targets.append(el.attr("src"))  # type: ignore[arg-type]
            elif el.tag == "link" and el.attr("href"):
                targets.append(el.attr("href"))  # type: ignore[arg-type]
        for target in targets:
            absolute = urljoin(base_url, target)
            try:
                sub = self.fetcher.fetch(absolute)
            except NavigationError:
                self.subresources.failed.append(absolute)
                continue
            self.subresources.fetched.append(absolute)
            self.har_entries.append(entry_from_fetch(sub))

    def _collect_templates(self, root: DomElement) -> None:
        self._pending = []
        for tpl in root.find_all("template"):
            after = tpl.attr("data-after-ms")
            if after is None:
                continue
            self._pending.append(
                _PendingMutation(
                    due_at_ms=float(after),
                    op=tpl.attr("data-op", "append") or "append",
                    target_id=(tpl.attr("data-target") or "").lstrip("#") or None,
                    content_html="".join(
                        _serialize_children(tpl)
                    ),
                    attr_name=tpl.attr("data-attr-name"),
                    attr_value=tpl.attr("data-attr-value"),
                )
            )
        self._pending.sort(key=lambda m: m.due_at_ms)

    # -- simulated time and mutations -----------------------------------------

    def wait_for_load_settled(self) -> None:
        """Document readiness plus network idle plus popup grace, advancing
        simulated time and firing due mutations."""
        self.advance(self.network_idle + self.popup_grace)
        self.settled = True

    def advance(self, seconds: float) -> None:
        """Advance simulated time, applying due mutations in order and
        coalescing ones that land within the same window."""
        if self.page is None:
            raise PreconditionError("no page loaded")
        target_ms = self._page_ms + seconds * 1000.0
        while self._pending and self._pending[0].due_at_ms <= target_ms:
            head = self._pending.pop(0)
            window_end = head.due_at_ms + self.coalesce_ms
            group = [head]
            while self._pending and self._pending[0].due_at_ms <= window_end:
                group.append(self._pending.pop(0))
            self.clock.offset += max(0.0, (head.due_at_ms - self._page_ms) / 1000.0)
            self._page_ms = head.due_at_ms
            roots = []
            for mut in group:
                changed = self._apply_mutation(mut)
                if changed is not None:
                    roots.append(changed)
            if roots:
                self._seq += 1
                self._batches.append(MutationBatch(self._seq, roots, self.coalesce_ms))
        self.clock.offset += max(0.0, (target_ms - self._page_ms) / 1000.0)
        self._page_ms = target_ms

    def _apply_mutation(self, mut: _PendingMutation) -> DomElement | None:
        page = self.current_page
        target = page.root.find_by_id(mut.target_id) if mut.target_id else _body_of(page.root)
        if target is None:
            return None
        if mut.op == "append":
            for node in parse_fragment(mut.content_html):
                target.append(node)
            changed = target
        elif mut.op == "set-text":
            target.children = [c for c in target.children if not isinstance(c, TextNode)]
            target.children.insert(0, TextNode(mut.content_html, target))
            changed = target
        elif mut.op == "remove":
            parent = target.parent
            target.remove_self()
            changed = parent
        elif mut.op == "set-attr" and mut.attr_name:
            target.attrs[mut.attr_name] = mut.attr_value or ""
            changed = target
        else:
            return None
        page.invalidate()
        return changed

    def drain_mutation_batches(self) -> list[MutationBatch]:
        batches, self._batches = self._batches, []
        return batches

    # -- interaction -----------------------------------------------------------

    def click(self, el: DomElement) -> None:
        """Fixture click semantics: links navigate, data-nav navigates,
        data-dismiss removes its target, data-broken raises."""
        page = self.current_page
        if not el.is_attached(page.root):
            raise InteractionError("element detached")
        if el.attr("data-broken") is not None:
            raise InteractionError(f"fixture element {el!r} is marked broken")
        requires = el.attr("data-requires")
        if requires:
            dep = page.root.find_by_id(requires.lstrip("#"))
            if dep is None or dep.attr("data-filled") is None:
                raise InteractionError(f"unsupported required input {requires}")
        href = el.attr("href") if el.tag == "a" else None
        nav = el.attr("data-nav") or href
        if nav:
            self.goto(urljoin(page.url, nav))
            return
        dismiss = el.attr("data-dismiss")
        if dismiss:
            target = page.root.find_by_id(dismiss.lstrip("#"))
            if target is not None:
                parent = target.parent
                target.remove_self()
                page.invalidate()
                self._seq += 1
                if parent is not None:
                    self._batches.append(MutationBatch(self._seq, [parent], self.coalesce_ms))
            return
        # plain button: successful no-op

    def required_option_groups(self) -> list[DomElement]:
        page = self.current_page
        groups = [el for el in page.root.find_all("select") if el.attr("required") is not None]
        return [g for g in groups if page.is_visible(g) or g.element_children()]

    def select_option(self, group: DomElement, option: DomElement) -> None:
        if option.attr("data-out-of-stock") is not None:
            raise InteractionError("option out of stock")
        for opt in group.find_all("option"):
            opt.attrs.pop("selected", None)
        option.attrs["selected"] = ""
        key = group.attr("name") or group.attr("id") or f"node-{group.node_id}"
        self.selected_options[key] = option.attr("value") or option.raw_text().strip()

    def links(self) -> list[str]:
        page = self.current_page
        seen = []
        for a in page.root.find_all("a"):
            href = a.attr("href")
            if not href or href.startswith("#"):
                continue
            absolute = urljoin(page.url, href)
            if absolute not in seen:
                seen.append(absolute)
        return seen

    def element_views(self) -> list[ElementView]:
        return self.current_page.element_views()

    def resolve_view(self, ref: str) -> DomElement | None:
        return self.current_page.element_by_ref(ref)


def _body_of(root: DomElement) -> DomElement:
    for el in root.element_children():
        if el.tag == "body":
            return el
    return root


def _serialize_children(tpl: DomElement) -> list[str]:
    from darkscope.browser.dom import serialize

    return [serialize(c) for c in tpl.children]
