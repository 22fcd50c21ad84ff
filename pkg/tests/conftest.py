from __future__ import annotations

from pathlib import Path

import pytest

from strongdich import affine_group, enumerate_subgroups, load_or_build

# Persistent across test runs so the expensive n=54/58 lattices are computed
# once; safe to delete at any time.
CACHE_DIR = Path(__file__).parent / "_cache"


@pytest.fixture(scope="session")
def cache_dir() -> Path:
    CACHE_DIR.mkdir(exist_ok=True)
    return CACHE_DIR


@pytest.fixture(scope="session")
def class_data(cache_dir):
    """Memoized AffineClassData per modulus, backed by the disk cache."""
    memo = {}

    def get(n: int, max_order: int = 2000):
        if n not in memo:
            memo[n] = load_or_build(n, cache_dir=cache_dir, max_order=max_order)
        return memo[n]

    return get


@pytest.fixture(scope="session")
def lattices():
    """Memoized subgroup lattices of Aff(Z/nZ) for small n."""
    memo = {}

    def get(n: int):
        if n not in memo:
            memo[n] = enumerate_subgroups(affine_group(n))
        return memo[n]

    return get
