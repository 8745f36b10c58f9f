import numpy as np
import pytest

from avekit.problem import make_tridiag_problem, tridiag

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def tri20():
    return make_tridiag_problem(20)


@pytest.fixture
def tri2():
    return make_tridiag_problem(2)


@pytest.fixture
def scalar_problem():
    """n = 1, A = [2], b = [1]; the solution is x* = 1."""
    from avekit.problem import AveProblem

    return AveProblem(np.array([[2.0]]), np.array([1.0]), np.array([1.0]))


@pytest.fixture
def tri_matrix():
    return lambda n: tridiag(n, -1.0, 8.0, -1.0)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
