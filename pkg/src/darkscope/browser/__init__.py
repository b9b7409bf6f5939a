from darkscope.browser.dom import DomElement, TextNode, parse_html, serialize
from darkscope.browser.page import Page
from darkscope.browser.session import FixtureBrowser, MutationBatch, SimulatedClock
from darkscope.browser.fetch import (
    DirectoryFetcher,
    FetchResult,
    HttpFetcher,
    MappingFetcher,
)
from darkscope.browser.har import har_document, read_har, write_har

__all__ = [
    "DomElement",
    "TextNode",
    "parse_html",
    "serialize",
    "Page",
    "FixtureBrowser",
    "MutationBatch",
    "SimulatedClock",
    "DirectoryFetcher",
    "FetchResult",
    "HttpFetcher",
    "MappingFetcher",
    "har_document",
    "read_har",
    "write_har",
]
