import pytest

from trex.graph import Digraph
from trex.minetrex import extract

# Worked example: eight vertices already in level order.  Tree arcs follow
# the direction bits D = (-,0,1,0,1,1,0,1); residual arcs follow A' and S'.
WORKED_TREE = [(2, 1), (1, 3), (4, 2), (3, 5), (3, 6), (7, 4), (6, 8)]
WORKED_RESIDUAL = [(1, 5), (2, 5), (2, 8), (6, 5), (7, 2), (7, 8), (8, 5)]


@pytest.fixture
def worked_graph():
    g = Digraph(8, WORKED_TREE + WORKED_RESIDUAL)
    return g, extract(g, range(len(WORKED_TREE)), root=1)


_VERDICTS = pytest.StashKey[list]()


@pytest.fixture
def verdict(request):
    """Record one acceptance line; the terminal summary prints them in order."""
    lines = request.config.stash.setdefault(_VERDICTS, [])

    def record(tag: str, ok: bool, detail: str) -> bool:
        lines.append(f"criterion {tag:<4} {'PASS' if ok else 'FAIL'}  {detail}")
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_VERDICTS, [])
    if lines:
        terminalreporter.section("acceptance")
        for line in lines:
            terminalreporter.write_line(line)
