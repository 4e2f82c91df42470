from __future__ import annotations

import os

import pytest

from sifted_mobius import sieve


@pytest.fixture(scope="session", autouse=True)
def shared_cache(tmp_path_factory):
    """One on-disk sieve cache for the whole session (or ADL_CACHE_DIR if set)."""
    path = os.environ.get("ADL_CACHE_DIR") or str(tmp_path_factory.mktemp("sieve-cache"))
    sieve.set_cache_dir(path)
    yield path
    sieve.set_cache_dir(None)
