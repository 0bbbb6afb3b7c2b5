"""Shared pytest fixtures."""

from pathlib import Path

import pytest

from bisim_lab.config import get_settings


@pytest.fixture(autouse=True)
def fresh_settings():
    """Environment overrides set with monkeypatch take effect per test."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def fixtures_dir() -> Path:
    return Path(__file__).parent / "fixtures"
