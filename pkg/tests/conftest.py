import pytest

from firman.core import Agent, IdentitySpace, NetworkState

# Six-agent illustration: A-D majority (0), E-F minority (1).
TABLE1 = {
    # name: (si, to, tc)
    "A": (0, 0, 3),
    "B": (0, 1, 2),
    "C": (0, 0, 2),
    "D": (0, 1, 3),
    "E": (1, 1, 2),
    "F": (1, 1, 3),
}
TABLE1_EDGES = [("A", "C"), ("A", "D"), ("B", "D"), ("C", "D"), ("B", "E"), ("E", "F")]
NAMES = list(TABLE1)
IDX = {name: i for i, name in enumerate(NAMES)}

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def space():
    return IdentitySpace()


@pytest.fixture
def table1_agents():
    return [Agent(i, (si,), to, tc) for i, (si, to, tc) in enumerate(TABLE1.values())]


@pytest.fixture
def table1_state(table1_agents):
    return NetworkState.from_edges(table1_agents, [(IDX[a], IDX[b]) for a, b in TABLE1_EDGES])


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
