import numpy as np
import pytest

from sawhorizon.constants import gaas_defaults
from sawhorizon.density import Grid1D, smoothed_density
from sawhorizon.speed import piecewise_speed, solve_speed_fixed_point


@pytest.fixture
def gaas():
    return gaas_defaults()


@pytest.fixture
def grid(gaas):
    # +-8/kappa_s at 0.01/kappa_s, x = 0 on the grid
    return Grid1D.symmetric(8.0 / gaas.kappa_s, 0.01 / gaas.kappa_s)


@pytest.fixture
def erf_profile(grid, gaas):
    return smoothed_density(grid, gaas.kappa_s)


@pytest.fixture
def fixed_point(erf_profile, gaas):
    return solve_speed_fixed_point(erf_profile, gaas)


@pytest.fixture
def piecewise(gaas, grid):
    return piecewise_speed(gaas, grid)


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
