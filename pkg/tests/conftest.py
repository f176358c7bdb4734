import numpy as np
import pytest

from h2plus.coords import Geometry
from h2plus.gaussian import reference_basis, variational_ground
from h2plus.separated import solve_ground

TABLE_R = (0.008, 0.010, 0.012, 0.019)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def sol2():
    return solve_ground(2.0)


@pytest.fixture(scope="session")
def exact_cache():
    cache = {}

    def get(R):
        if R not in cache:
            cache[R] = solve_ground(R)
        return cache[R]

    return get


@pytest.fixture(scope="session")
def var2():
    return variational_ground(reference_basis(2.0), Geometry(2.0))


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
