import numpy as np
import pytest

from sleraman import _backend
from sleraman.kinetics import RateMatrix
from sleraman.scenario import load
from sleraman.sle import SLEModel, VibrationalMode
from sleraman.units import cm_to_rad


@pytest.fixture(scope="session")
def regime1():
    return load("regime-I").model()


@pytest.fixture(scope="session")
def regime2():
    return load("regime-II").model()


@pytest.fixture
def single_state_model():
    mode = VibrationalMode(cm_to_rad(1200.0), 0.0, cm_to_rad(10.0))
    return SLEModel(RateMatrix.static(1), (mode,))


@pytest.fixture(params=_backend.available())
def backend(request):
    previous = _backend.NAME
    _backend.select(request.param)
    yield request.param
    _backend.select(previous)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
