from __future__ import annotations

import pytest

from igband.bundled import BUNDLED, load
from igband.rewrite import parse_word


@pytest.fixture(params=BUNDLED)
def bundled(request):
    """(name, band, decomposition) for every shipped band."""
    b, d = load(request.param)
    return request.param, b, d


def words(b, *texts):
    return [parse_word(b, t) for t in texts]


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
