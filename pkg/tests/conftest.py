import numpy as np
import pytest

from taubnut import FIGURE_PARAMS, SystemParams


@pytest.fixture
def fig():
    """2l = m = k = 1 with eta = 0.1."""
    return FIGURE_PARAMS


@pytest.fixture
def flat():
    return SystemParams(m=1.0, k=1.0, l=0.5, eta=0.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240101)
