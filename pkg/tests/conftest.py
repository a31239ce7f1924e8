import numpy as np
import pytest

from cmaxrel import make_context


@pytest.fixture
def ctx():
    """Natural units, c_m = 2c."""
    return make_context(1.0, 2.0, 1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)
