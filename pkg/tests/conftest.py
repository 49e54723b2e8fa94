import numpy as np
import pytest

from vmpic.feec import build_complex


@pytest.fixture(scope="session")
def cplx16():
    """Small degree-3 complex shared by fast tests."""
    return build_complex(3, 16, 2.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
