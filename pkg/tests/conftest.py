import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from latfrob import witt  # noqa: E402
from latfrob.rings import BaseSetup  # noqa: E402


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path, monkeypatch):
    monkeypatch.setenv("LATFROB_CACHE_DIR", str(tmp_path / "cache"))
    witt.set_table_store(None)
    yield
    witt.set_table_store(None)


@pytest.fixture
def zz2():
    return BaseSetup("char-zero", 2)


@pytest.fixture
def zz3():
    return BaseSetup("char-zero", 3)


@pytest.fixture
def fq2():
    return BaseSetup("char-p", 2)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
