"""Minimal DOM tree for the headless fixture browser.

Parses well-formed fixture HTML into a mutable element tree. This is not a
general-purpose HTML5 parser; fixture pages are authored with balanced tags.
"""

from __future__ import annotations

import itertools
from html import escape
from html.parser import HTMLParser
from typing import Iterator, Optional

VOID_TAGS = {
    "area", "base", "br", "col", "embed", "hr", "img", "input",
    "link", "meta", "source", "track", "wbr",
}

_node_counter = itertools.count(1)


class TextNode:
    __slots__ = ("text", "parent")

    def __init__(self, text: str, parent: Optional["DomElement"] = None):
        self.text = text
        self.parent = parent

    def __repr__(self):
        return f"TextNode({self.text[:30]!r})"


class DomElement:
    def __init__(self, tag: str, attrs: dict[str, str] | None = None):
        self.tag = tag.lower()
        self.attrs = dict(attrs or {})
        self.children: list[DomElement | TextNode] = []
        self.parent: DomElement | None = None
        self.node_id = next(_node_counter)

    # -- tree access ------------------------------------------------------

    def append(self, node: "DomElement | TextNode") -> None:
        node.parent = self
        self.children.append(node)

    def remove_self(self) -> None:
        if self.parent is not None:
            self.parent.children.remove(self)
            self.parent = None

    def element_children(self) -> list["DomElement"]:
        return [c for c in self.children if isinstance(c, DomElement)]

    def text_nodes(self) -> list[TextNode]:
        return [c for c in self.children if isinstance(c, TextNode)]

    def iter(self) -> Iterator["DomElement"]:
        yield self
        for child in self.element_children():
            yield from child.iter()

    def ancestors(self) -> Iterator["DomElement"]:
        node = self.parent
        while node is not None:
            yield node
            node = node.parent

    def is_attached(self, root: "DomElement") -> bool:
        return self is root or root in self.ancestors()

    # -- attribute helpers --------------------------------------------------

    def attr(self, name: str, default: str | None = None) -> str | None:
        return self.attrs.get(name, default)

    @property
    def id(self) -> str | None:
        return self.attrs.get("id")

    def find_by_id(self, element_id: str) -> Optional["DomElement"]:
        for el in self.iter():
            if el.id == element_id:
                return el
        return None

    def find_all(self, tag: str | None = None, **attr_filters: str) -> list["DomElement"]:
        out = []
        for el in self.iter():
            if tag is not None and el.tag != tag:
                continue
            if all(el.attrs.get(k.rstrip("_")) == v for k, v in attr_filters.items()):
                out.append(el)
        return out

    def raw_text(self) -> str:
        """All descendant text, no visibility rules (use Page.inner_text for
        rendered text)."""
        parts = []
        for child in self.children:
            if isinstance(child, TextNode):
                parts.append(child.text)
            else:
                parts.append(child.raw_text())
        return "".join(parts)

    def __repr__(self):
        ident = f"#{self.id}" if self.id else ""
        return f"<{self.tag}{ident} node={self.node_id}>"


class _TreeBuilder(HTMLParser):
    def __init__(self):
        super().__init__(convert_charrefs=True)
        self.root = DomElement("html")
        self._stack = [self.root]
        self._saw_html = False

    def handle_starttag(self, tag, attrs):
        tag = tag.lower()
        if tag == "html" and not self._saw_html:
            self._saw_html = True
            self.root.attrs.update({k: (v or "") for k, v in attrs})
            return
        el = DomElement(tag, {k: (v or "") for k, v in attrs})
        self._stack[-1].append(el)
        if tag not in VOID_TAGS:
            self._stack.append(el)

    def handle_startendtag(self, tag, attrs):
        el = DomElement(tag.lower(), {k: (v or "") for k, v in attrs})
        self._stack[-1].append(el)

    def handle_endtag(self, tag):
        tag = tag.lower()
        if tag in VOID_TAGS:
            return
        for i in range(len(self._stack) - 1, 0, -1):
            if self._stack[i].tag == tag:
                del self._stack[i:]
                break

    def handle_data(self, data):
        if data:
            self._stack[-1].append(TextNode(data, self._stack[-1]))


def parse_html(html: str) -> DomElement:
    """Parse fixture HTML; returns the root element (always `html`)."""
    builder = _TreeBuilder()
    builder.feed(html)
    builder.close()
    return builder.root


def parse_fragment(html: str) -> list[DomElement | TextNode]:
    """Parse a fragment; returns its top-level nodes."""
    root = parse_html(html)
    nodes = list(root.children)
    for node in nodes:
        node.parent = None
    return nodes


def serialize(node: DomElement | TextNode) -> str:
    """Serialize a subtree back to HTML."""
    if isinstance(node, TextNode):
        return escape(node.text, quote=False)
    attrs = "".join(f' {k}="{escape(v)}"' for k, v in node.attrs.items())
    if node.tag in VOID_TAGS:
        return f"<{node.tag}{attrs}>"
    inner = "".join(serialize(c) for c in node.children)
    return f"<{node.tag}{attrs}>{inner}</{node.tag}>"
