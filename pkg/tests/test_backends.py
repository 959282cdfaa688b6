"""The compiled kernels and the numpy fallback must agree to round-off."""

import numpy as np
import pytest

from sleraman import _backend, _fallback
from sleraman.numerics.faddeeva import COEFFS, L_PARAM

pytestmark = pytest.mark.skipif("cython" not in _backend.available(),
                                reason="compiled kernels not built")


@pytest.fixture(scope="module")
def compiled():
    from sleraman import _kernels
    return _kernels


def test_faddeeva_upper(compiled, rng):
    z = rng.uniform(-40, 40, 500) + 1j * rng.uniform(0, 30, 500)
    a = compiled.faddeeva_upper(z, COEFFS, L_PARAM)
    b = _fallback.faddeeva_upper(z, COEFFS, L_PARAM)
    assert np.max(np.abs(a - b) / np.abs(b)) < 1e-14


@pytest.mark.parametrize("T", [0.0, 2e-15, 1e-12, 15e-12])
def test_gauss_pole_overlap(compiled, rng, T):
    poles = rng.uniform(1e11, 5e12, 8) + 1j * rng.uniform(-1e14, 1e14, 8)
    d0 = rng.uniform(-3e14, 3e14, 100)
    a = compiled.gauss_pole_overlap(poles, d0, T, 2e-14, COEFFS, L_PARAM)
    b = _fallback.gauss_pole_overlap(poles, d0, T, 2e-14, COEFFS, L_PARAM)
    assert np.max(np.abs(a - b)) <= 1e-13 * np.max(np.abs(b))


def test_shifted_solve(compiled, rng):
    a0 = rng.normal(size=(7, 7))
    shifts = 1j * rng.normal(size=40) + rng.normal(size=40)
    rhs = rng.normal(size=7) + 0j
    a = compiled.shifted_solve(a0, shifts, rhs)
    b = _fallback.shifted_solve(a0, shifts, rhs)
    ref = np.array([np.linalg.solve(a0 + s * np.eye(7), rhs) for s in shifts])
    np.testing.assert_allclose(a, ref, rtol=1e-11, atol=1e-12)
    np.testing.assert_allclose(b, ref, rtol=1e-11, atol=1e-12)


def test_shifted_solve_singular(compiled):
    from sleraman.errors import SingularResolvent
    for mod in (compiled, _fallback):
        with pytest.raises(SingularResolvent):
            mod.shifted_solve(np.zeros((2, 2)), [0.0], np.ones(2))


def test_pole_overlap_integrand(compiled, rng):
    u = rng.uniform(-6e14, 6e14, 64)
    d0 = rng.uniform(-1e14, 1e14, 5)
    poles = rng.uniform(1e11, 5e12, 3) + 0j
    a = compiled.pole_overlap_integrand(u, 1e12, d0, 5e-12, 2e-14, poles, 0.3)
    b = _fallback.pole_overlap_integrand(u, 1e12, d0, 5e-12, 2e-14, poles, 0.3)
    np.testing.assert_allclose(a, b, rtol=1e-13)


def test_select_switches_kernels():
    previous = _backend.NAME
    try:
        _backend.select("python")
        assert _backend.gauss_pole_overlap is _fallback.gauss_pole_overlap
        _backend.select("cython")
        assert _backend.gauss_pole_overlap is not _fallback.gauss_pole_overlap
    finally:
        _backend.select(previous)
    with pytest.raises(ValueError):
        _backend.select("fortran")
