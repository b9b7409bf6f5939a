from __future__ import annotations

import pytest

from darkscope.store import SnapshotStore


@pytest.fixture
def store(tmp_path):
    return SnapshotStore(tmp_path / "store")


@pytest.fixture(scope="session")
def shop_server():
    """One scripted fixture server for the whole session."""
    from darkscope.fixtures.shopserver import FixtureShopServer
    from darkscope.fixtures.sites import (
        DECEPTION_HOST,
        build_deception_pages,
        build_five_site_corpus,
        build_outcome_corpus,
    )

    server = FixtureShopServer()
    for host, pages in build_five_site_corpus().items():
        server.add_site(host, pages)
    server.add_site(DECEPTION_HOST, build_deception_pages())
    outcome_sites, _ = build_outcome_corpus()
    for host, pages in outcome_sites.items():
        server.add_site(host, pages)
    server.start()
    yield server
    server.stop()
