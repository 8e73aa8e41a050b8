import numpy as np
import pytest

from qwzeta import linalg


@pytest.fixture(params=sorted(linalg.BACKENDS))
def backend(request):
    """Every kernel backend available in this build."""
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)
