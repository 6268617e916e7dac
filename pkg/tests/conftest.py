import math

import pytest

from revival.params import ModelParams

TWO_PI = 2.0 * math.pi


@pytest.fixture
def weak():
    """lam = 0.1, nbar = 0.5, classical_n = 1."""
    return ModelParams(0.1, 0.5, 1.0)
