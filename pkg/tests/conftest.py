from pathlib import Path

import pytest

from lcbs.map_io import AgentTask, GridMap, build_graph

DATA = Path(__file__).resolve().parents[1] / "src" / "lcbs" / "data"


def grid_graph(*rows):
    return build_graph(GridMap.from_rows(rows))


def xy_tasks(graph, *pairs):
    """Tasks from ``((sx, sy), (gx, gy))`` pairs."""
    return [AgentTask(i, graph.vertex(*s), graph.vertex(*g)) for i, (s, g) in enumerate(pairs)]


@pytest.fixture(scope="session")
def data_dir():
    return DATA


@pytest.fixture(scope="session")
def empty32():
    return (DATA / "empty-32-32.map").read_bytes()


ACCEPTANCE: dict[int, tuple[bool, str]] = {}


@pytest.fixture(scope="session")
def acceptance():
    """Record ``(passed, detail)`` per criterion number for the summary."""
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
