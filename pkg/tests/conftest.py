import sys
from functools import lru_cache
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

import pytest

from wgk.pipeline import compute_tables, make_instance


@lru_cache(maxsize=None)
def tables(group: str, weights: str, name: str):
    return compute_tables(make_instance(group, weights, name))


@pytest.fixture
def get_tables():
    return tables


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
