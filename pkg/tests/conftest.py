import numpy as np
import pytest

from puresep.oracle import bell, ghz, w_state
from puresep.state import product_state

from helpers import SQ2, ket


@pytest.fixture
def rng():
    return np.random.default_rng(20261018)


@pytest.fixture
def bell_state():
    return bell()


@pytest.fixture
def ghz3():
    return ghz((2, 2, 2))


@pytest.fixture
def w3():
    return w_state((2, 2, 2))


@pytest.fixture
def qutrit_max():
    return ghz((3, 3))


@pytest.fixture
def bell_times_zero():
    return product_state(bell(), ket(1, 0))


@pytest.fixture
def zero_one_plus():
    return product_state(ket(1, 0), ket(0, 1), ket(SQ2, SQ2))

