import pytest

from kg_lab import UnitSystem, make_grid


@pytest.fixture
def natural():
    return UnitSystem.natural()


@pytest.fixture
def units_m4():
    return UnitSystem(hbar=1.0, c=1.0, m=4.0)


@pytest.fixture
def grid400():
    return make_grid(4096, 400.0)


@pytest.fixture
def grid_small():
    return make_grid(256, 100.0)
