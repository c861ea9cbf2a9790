from __future__ import annotations

import functools

import pytest

from holocode.holocode import HolographicCode
from holocode.tiling import Inflation, TilingSpec, generate


@functools.lru_cache(maxsize=None)
def tiling(n=5, k=4, inflation="vertex", layers=2, max_boundary=10**7):
    return generate(TilingSpec(n, k, Inflation(inflation), layers), max_boundary=max_boundary)


@functools.lru_cache(maxsize=None)
def code(inflation="vertex", layers=2, bulk="all-zero"):
    return HolographicCode.build(tiling(5, 4, inflation, layers), bulk)


@pytest.fixture
def tiling_factory():
    return tiling


@pytest.fixture
def code_factory():
    return code
