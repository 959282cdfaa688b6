import numpy as np
import pytest

from sleraman.kinetics import RateMatrix
from sleraman.numerics import integrate_adaptive
from sleraman.sle import (SLEModel, VibrationalMode, coherence_block, coherence_green_freq,
                          coherence_green_time, coherence_rowsum, frequencies_along_chain,
                          matter_correlation, population_green_time)
from sleraman.units import cm_to_rad, rad_to_cm


def test_mode_validation():
    with pytest.raises(ValueError):
        VibrationalMode(0.0, 1.0, 1.0)
    with pytest.raises(ValueError):
        VibrationalMode(1.0, 1.0, 0.0)


def test_chain_frequencies_spacing(regime1):
    w = frequencies_along_chain(regime1.modes[2], 10)
    np.testing.assert_allclose(np.diff(w), 7.51e12, rtol=1e-14)
    assert rad_to_cm(7.51e12) == pytest.approx(40.0, abs=0.2)


def test_zero_shift_constant():
    mode = VibrationalMode(1e14, 0.0, 1e12)
    assert np.all(frequencies_along_chain(mode, 6) == 1e14)


@pytest.mark.parametrize("preset", ["regime1", "regime2"])
def test_modes_two_and_three_cross_between_five_and_six(preset, request):
    model = request.getfixturevalue(preset)
    w2 = frequencies_along_chain(model.modes[1], 10)
    w3 = frequencies_along_chain(model.modes[2], 10)
    assert w2[4] > w3[4] and w2[5] < w3[5]


def test_block_structure(regime1):
    m = coherence_block(regime1.rates, regime1.modes[0]).M
    np.testing.assert_allclose(m.real, -regime1.rates.K - regime1.modes[0].gamma * np.eye(10))
    np.testing.assert_allclose(np.diag(m.imag), frequencies_along_chain(regime1.modes[0], 10))
    assert np.all(np.linalg.eigvals(m).real < 0)


def test_population_block_has_no_frequencies(regime1):
    g = population_green_time(regime1.rates, 0.0, 1e-12)
    # only kinetics: -i times a real matrix
    assert np.max(np.abs(g.real)) < 1e-15 * np.max(np.abs(g))


def test_green_time_limits(regime1):
    b = coherence_block(regime1.rates, regime1.modes[0])
    assert np.array_equal(coherence_green_time(b, -1e-15), np.zeros((10, 10)))
    np.testing.assert_allclose(coherence_green_time(b, 0.0), -1j * np.eye(10))
    assert np.array_equal(population_green_time(regime1.rates, 1e12, -1.0), np.zeros((10, 10)))


def test_green_time_scalar():
    mode = VibrationalMode(2e14, 0.0, 3e12)
    b = coherence_block(RateMatrix.static(1), mode)
    t = 4e-13
    g = coherence_green_time(b, t)[0, 0]
    assert g == pytest.approx(-1j * np.exp((1j * 2e14 - 3e12) * t), rel=1e-13)
    assert abs(g) == pytest.approx(np.exp(-3e12 * t), rel=1e-13)


def test_green_time_semigroup(regime1):
    b = coherence_block(regime1.rates, regime1.modes[3])
    t1, t2 = 1.3e-13, 4.1e-13
    lhs = coherence_green_time(b, t1 + t2)
    rhs = coherence_green_time(b, t1) @ (1j * coherence_green_time(b, t2))
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_green_freq_scalar():
    mode = VibrationalMode(2e14, 0.0, 3e12)
    b = coherence_block(RateMatrix.static(1), mode)
    for w in (-2e14, 0.0, 1e13):
        g = coherence_green_freq(b, w)[0, 0]
        assert g == pytest.approx(1.0 / (w + 2e14 + 3e12j), rel=1e-14)


def test_green_freq_is_fourier_transform(regime1):
    b = coherence_block(regime1.rates, regime1.modes[1])
    gamma = regime1.modes[1].gamma
    from sleraman.numerics import expm
    for w in -cm_to_rad(np.array([700.0, 1100.0, 1290.0, 1350.0, 1700.0])):
        def f(t):
            return np.array([np.exp(1j * w * tk) * (-1j) * expm(b.M * tk) for tk in t])
        ref = integrate_adaptive(f, 0.0, 20 / gamma, tol=1e-300, rtol=1e-9,
                                 reduce_axes=(0, 1), initial_panels=64)
        got = coherence_green_freq(b, w)
        assert np.max(np.abs(got - ref)) <= 1e-6 * np.max(np.abs(got))


def test_rowsum_matches_full_resolvent(regime1, backend):
    b = coherence_block(regime1.rates, regime1.modes[2])
    w = -cm_to_rad(np.array([900.0, 1200.0, 1450.0]))
    rows = coherence_rowsum(b, w)
    for k, wk in enumerate(w):
        np.testing.assert_allclose(rows[k], np.ones(10) @ coherence_green_freq(b, wk), rtol=1e-12)


def test_static_chain_resonance_at_first_state():
    mode = VibrationalMode(cm_to_rad(1200.0), cm_to_rad(40.0), cm_to_rad(10.0))
    b = coherence_block(RateMatrix.static(6), mode)
    shifts = np.arange(1100.0, 1500.0, 0.5)
    vals = [abs((np.ones(6) @ coherence_green_freq(b, -cm_to_rad(s)))[0]) for s in shifts]
    assert shifts[int(np.argmax(vals))] == pytest.approx(1200.0, abs=0.5)


def test_matter_correlation_origin(regime1):
    total = sum(m.alpha ** 2 * m.mu_ag ** 2 for m in regime1.modes)
    # three factors of -i combine to +i
    assert matter_correlation(regime1, 0.0, 0.0) == pytest.approx(1j * total, rel=1e-14)


def test_matter_correlation_bounded(regime1):
    f0 = abs(matter_correlation(regime1, 0.0, 0.0))
    for t1 in np.linspace(0, 2e-12, 7):
        for t2 in np.linspace(0, 5e-12, 7):
            assert abs(matter_correlation(regime1, t1, t2)) <= f0 * (1 + 1e-12)


def test_matter_correlation_single_state():
    mode = VibrationalMode(2e14, 0.0, 3e12, alpha=0.5)
    model = SLEModel(RateMatrix.static(1), (mode,))
    t1, t2 = 2e-13, 7e-13
    expected = 1j * 0.25 * np.exp((1j * 2e14 - 3e12) * t1) * np.exp(-2 * 3e12 * t2)
    assert matter_correlation(model, t1, t2) == pytest.approx(expected, rel=1e-12)
    assert matter_correlation(model, -1.0, t2) == 0


def test_model_validation(regime1):
    with pytest.raises(ValueError):
        SLEModel(regime1.rates, ())
    with pytest.raises(ValueError):
        SLEModel(regime1.rates, regime1.modes, p0=np.full(10, 0.5))
