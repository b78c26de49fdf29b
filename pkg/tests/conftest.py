import numpy as np
import pytest

from src.dynsys import chacon
from src.nilgroup import abelian, heisenberg, ut4


@pytest.fixture(scope='session')
def word():
    """Chacon prefix long enough for windows up to 10^4 and squares up to 500^2"""
    return chacon(min_length=250000)


@pytest.fixture(scope='session')
def long_word():
    return chacon()


@pytest.fixture(scope='session')
def z1():
    return abelian(1)


@pytest.fixture(scope='session')
def z2():
    return abelian(2)


@pytest.fixture(scope='session')
def heis():
    return heisenberg()


@pytest.fixture(scope='session')
def ut():
    return ut4()


@pytest.fixture
def rng():
    return np.random.default_rng(0)
