import pytest

from clifford_ricci.conformal_profile import make_bump, profile
from clifford_ricci.moebius_balance import clifford_problem
from clifford_ricci.spectral import TorusGrid


@pytest.fixture
def bump():
    return make_bump(0.05)


@pytest.fixture
def prof(bump):
    return profile(bump)


@pytest.fixture
def grid():
    return TorusGrid(64)


@pytest.fixture
def problem(grid):
    return clifford_problem(grid)
