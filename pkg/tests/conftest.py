from __future__ import annotations

import sys
from pathlib import Path

import pytest

from ratiocycle.graph import RatioGraph

sys.path.insert(0, str(Path(__file__).parent))


def two_cycle() -> RatioGraph:
    """Edges (0,1,c=3,t=1) and (1,0,c=1,t=1); minimum ratio 2."""
    return RatioGraph.from_tuples(2, [(0, 1, 3, 1), (1, 0, 1, 1)])


@pytest.fixture
def fixture2cycle() -> RatioGraph:
    return two_cycle()


@pytest.fixture
def fixture_path(tmp_path) -> Path:
    p = tmp_path / "fixture2cycle.txt"
    p.write_text("c two-cycle fixture\np ratio 2 2\na 0 1 3 1\na 1 0 1 1\n")
    return p


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance():
    def record(number: int, ok: bool, detail: str) -> bool:
        line = f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}"
        print(line)
        ACCEPTANCE_LINES.append(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
