import pytest

from topocnot.arch import all_pairs_distances, parse_architecture
from topocnot.gf2 import BitMatrix, Permutation, RowAdd

A_ROWS = [
    [1, 1, 0, 1, 1],
    [0, 0, 1, 1, 0],
    [1, 0, 1, 0, 1],
    [1, 1, 0, 1, 0],
    [1, 1, 1, 1, 0],
]

# Factor list E(2+4) ... E(3+2) as written left to right; reversed, it is the
# product-order sequence (see test_rewrite for the literal reading).
LISTED_FACTORS = [(2, 4), (4, 3), (2, 1), (1, 5), (1, 3), (5, 2), (3, 2)]
A_PRIME_IMAGE = (5, 4, 1, 2, 3)
T_GRAPH_TEXT = "qubits 5\nedge 1 2\nedge 2 3\nedge 3 4\nedge 3 5\n"
OPTIMAL_PLACEMENT = (2, 3, 5, 4, 1)


@pytest.fixture
def fixture_matrix():
    return BitMatrix.from_lists(A_ROWS)


@pytest.fixture
def fixture_seq():
    return [RowAdd(i, j) for i, j in reversed(LISTED_FACTORS)]


@pytest.fixture
def a_prime():
    return Permutation(A_PRIME_IMAGE)


@pytest.fixture
def t_graph():
    return parse_architecture(T_GRAPH_TEXT, name="T")


@pytest.fixture
def t_table(t_graph):
    return all_pairs_distances(t_graph)


# One line per acceptance criterion, printed in the terminal summary.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
