import numpy as np
import pytest

from fracid import ModelParameters, SampledSeries, simulate

STEP = 0.05
HORIZON = 20.0

INTEGER_MODEL = ModelParameters(1.0, 3.0, 2.0, 2.0, 1.0)
FRACTIONAL_MODEL = ModelParameters(0.8, 0.5, 1.0, 2.2, 0.9)


def integer_analytic(t):
    """Unit-step response of y'' + 3y' + 2y = 1, y(0) = y'(0) = 0."""
    return 0.5 - np.exp(-t) + 0.5 * np.exp(-2 * t)


@pytest.fixture(scope="session")
def unit_step():
    return SampledSeries.unit_step(STEP, HORIZON)


@pytest.fixture(scope="session")
def integer_data(unit_step):
    return unit_step, simulate(INTEGER_MODEL, unit_step)


@pytest.fixture(scope="session")
def fractional_data(unit_step):
    return unit_step, simulate(FRACTIONAL_MODEL, unit_step)
