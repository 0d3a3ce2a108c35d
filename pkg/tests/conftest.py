from functools import lru_cache

import pytest

from cmctori.surface import SurfaceParams, closure_for, refine_closing
from cmctori.table import REFERENCE_TABLE

ACCEPTANCE_LINES: list[str] = []


@lru_cache(maxsize=None)
def published(name: str):
    row = REFERENCE_TABLE[name]
    params = SurfaceParams.from_st(row.s, row.t)
    return params, closure_for(params, row.k, row.w)


@lru_cache(maxsize=None)
def refined(name: str):
    """Exactly closing parameters nearest to a table row, with their closure."""
    row = REFERENCE_TABLE[name]
    params = refine_closing(SurfaceParams.from_st(row.s, row.t), row.k, row.w, row.precision)
    return params, closure_for(params, row.k, row.w)


@pytest.fixture
def row_surface():
    return refined


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
