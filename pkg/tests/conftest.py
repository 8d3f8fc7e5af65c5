import numpy as np
import pytest

from pitwave.kernels import numpy_backend

BACKENDS = [numpy_backend]
try:
    from pitwave.kernels import numba_backend
    BACKENDS.append(numba_backend)
except ImportError:
    pass


@pytest.fixture(params=BACKENDS, ids=lambda b: b.BACKEND_NAME)
def backend(request):
    return request.param


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
