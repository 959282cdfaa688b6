"""Self-checks behind ``sle-raman validate``.

Each check returns ``(name, measured, tolerance)``; it passes when the
measured discrepancy does not exceed the tolerance.
"""

import numpy as np

from .kinetics import RateMatrix, build_chain, initial_state, propagate
from .scenario import load
from .signals import fsrs_spectrum, fsrs_spectrum_time_domain, overlap_integral, overlap_kernel, tasp_spectrum
from .sle import SLEModel, VibrationalMode
from .sos import fsrs_sos, system_from_sle, tasp_sos
from .units import PS, cm_to_rad, fs_to_s


def _peak_normalized(a, b):
    return float(np.max(np.abs(a - b)) / np.max(np.abs(a)))


def check_overlap_paths(quick=True):
    model = load("regime-I").model()
    shifts = np.arange(600.0, 1800.0, 20.0 if quick else 1.0)
    omega_rel = model.pulses.detuning(cm_to_rad(shifts))
    kernel = overlap_kernel(model.rates, model.modes[0].gamma, model.p0)
    worst = 0.0
    delays = (fs_to_s(2.0), 0.5 * PS, 2.0 * PS) if quick else (fs_to_s(2.0), 0.5 * PS, PS, 2 * PS, 5 * PS)
    for T in delays:
        a = overlap_integral(kernel, model.pulses, omega_rel, T, "analytic")
        q = overlap_integral(kernel, model.pulses, omega_rel, T, "quadrature", rtol=1e-9)
        rel = np.max(np.abs(a - q), axis=1) / np.max(np.abs(a), axis=1)
        worst = max(worst, float(rel.max()))
    return "overlap analytic vs quadrature", worst, 1e-6


def check_time_domain(quick=True):
    model = load("regime-I").model()
    shifts = np.arange(600.0, 1800.0, 10.0 if quick else 1.0)
    worst = 0.0
    for T in ((0.5 * PS,) if quick else (fs_to_s(2.0), 0.5 * PS, 5 * PS)):
        f = fsrs_spectrum(model, shifts, T).values
        t = fsrs_spectrum_time_domain(model, shifts, T).values
        worst = max(worst, _peak_normalized(f, t))
    return "FSRS frequency vs time domain", worst, 1e-4


def check_sos_reduction(quick=True):
    gamma = cm_to_rad(10.0)
    modes = (VibrationalMode(cm_to_rad(1000.0), 0.0, gamma, alpha=1.0, mu_ac=0.8),
             VibrationalMode(cm_to_rad(1400.0), 0.0, gamma, alpha=0.6, mu_ac=1.1))
    model = SLEModel(RateMatrix.static(1), modes)
    system = system_from_sle(model)
    shifts = np.arange(600.0, 1800.0, 5.0 if quick else 1.0)
    x = model.pulses.detuning(cm_to_rad(shifts))
    worst = 0.0
    for T in (0.0, 0.3 * PS, 2 * PS):
        a = fsrs_spectrum(model, shifts, T).values
        b = fsrs_sos(system, model.pulses, x, T, diagrams=("ii",))
        c = tasp_spectrum(model, shifts, T).values
        d = tasp_sos(system, model.pulses, x, T, diagrams=("i",))
        worst = max(worst, _peak_normalized(a, b), _peak_normalized(c, d))
    return "single-state SLE vs sum over states", worst, 1e-8


def check_conservation(quick=True):
    rates = load("regime-I").rate_matrix()
    times = np.linspace(0.0, 20 * PS, 21 if quick else 201)
    p = propagate(rates, initial_state(rates.N), times).populations
    return "population conservation", float(np.max(np.abs(p.sum(axis=0) - 1.0))), 1e-12


def check_eigen_path(quick=True):
    rates = load("regime-I").rate_matrix()
    times = np.array([0.0, 0.1, 1.0, 5.0, 15.0]) * PS
    a = propagate(rates, initial_state(rates.N), times, method="expm").populations
    b = propagate(rates, initial_state(rates.N), times, method="eigen").populations
    return "populations expm vs eigen", float(np.max(np.abs(a - b))), 1e-10


def check_steady_state(quick=True):
    rates = build_chain(2, 1e12, 1e12)
    p = propagate(rates, initial_state(2), [1e-9]).populations[:, 0]
    return "two-state steady state", float(np.max(np.abs(p - [1 / 11, 10 / 11]))), 1e-12


CHECKS = (check_overlap_paths, check_time_domain, check_sos_reduction,
          check_conservation, check_eigen_path, check_steady_state)


def run_all(quick=True):
    return [check(quick) for check in CHECKS]
