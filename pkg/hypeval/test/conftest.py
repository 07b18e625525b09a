"""
Shared fixtures: every test starts from default settings in a clean directory
"""

import pytest

from hypeval.settings import reset_settings

_ENV = ("HYPEVAL_PRECISION", "HYPEVAL_SEED", "HYPEVAL_TOL", "HYPEVAL_WORKERS", "HYPEVAL_CONFIG")


@pytest.fixture(autouse=True)
def clean_settings(tmp_path, monkeypatch):
    """Isolate settings from the working directory and environment"""
    monkeypatch.chdir(tmp_path)
    for name in _ENV:
        monkeypatch.delenv(name, raising=False)
    reset_settings()
    yield
    reset_settings()
