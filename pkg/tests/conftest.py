"""Shared pytest fixtures: the fields and embeddings that recur across modules."""

from __future__ import annotations

import pytest

from mdcf.config import get_settings
from mdcf.numberfield import NumberField
from mdcf.realembed import select_root


@pytest.fixture(autouse=True)
def _fresh_settings(monkeypatch: pytest.MonkeyPatch):
    """Isolate every test from MDCF_* variables of the host environment."""

    for name in ("MDCF_MAX_PRECISION_BITS", "MDCF_FIXTURES_DIR", "MDCF_DEFAULT_MAX_STEPS", "MDCF_ORACLE_STEPS"):
        monkeypatch.delenv(name, raising=False)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def cube_nine() -> NumberField:
    """Q(theta) with theta^3 = 9, the l = 3, m = 2 pure power."""

    return NumberField.from_highest([1, 0, 0, -9])


@pytest.fixture
def trinomial3() -> NumberField:
    """Q(delta) with delta^3 - 3 delta + 1 = 0."""

    return NumberField.from_highest([1, 0, -3, 1])


@pytest.fixture
def cube_nine_emb(cube_nine):
    return select_root(cube_nine, (2, 3))


@pytest.fixture
def trinomial3_emb(trinomial3):
    return select_root(trinomial3, (0, 1))
