import pytest


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    # Never touch the user's real cache from tests.
    monkeypatch.setenv("DAVENPORT_CACHE", str(tmp_path / "cache.jsonl"))
