import numpy as np
import pytest

from opcausal import MultivariateSeries


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


@pytest.fixture
def random_series(rng):
    return MultivariateSeries(data=rng.standard_normal((2000, 3)))
