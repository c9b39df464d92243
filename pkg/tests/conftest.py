import numpy as np
import pytest

from elsim.oseen_frank import FrankConstants
from elsim.spectral import TorusGrid
from elsim.stresses import LeslieCoefficients


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(12345))


@pytest.fixture(scope="session")
def grid16():
    return TorusGrid(16)


@pytest.fixture(scope="session")
def grid32():
    return TorusGrid(32)


@pytest.fixture
def parodi():
    """Validated coefficients with λ = μ2 + μ3 = 0.5 and μ5 + μ6 = 1.25."""
    return LeslieCoefficients(mu1=1.0, mu2=0.1, mu3=0.4, mu4=1.0, mu5=0.6, mu6=0.65, lam=0.5)


@pytest.fixture(params=["min_split", "equal_split"])
def frank(request):
    return FrankConstants(1.0, 0.8, 1.2, request.param)
