import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(np.random.Philox(key=12345))
