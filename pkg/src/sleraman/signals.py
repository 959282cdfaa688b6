"""SLE observables: frequency-domain FSRS, its static-average limit, TASP,
and the time-domain FSRS evaluator used as a cross-check.

All spectra are functions of the Raman shift (cm^-1 at the boundary).  The
per-state contraction pairs the s-th column sum of the coherence resolvent
with the s-th component of the probe-weighted population transform:

    S(w, T) = Im[-2i E_p(w) |E_1|^2 sum_modes alpha^2 sum_s g_s(w) I_s(w, T)].
"""

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import _backend
from .errors import NoConvergence, NonFiniteResult
from .kinetics import RateMatrix, propagate
from .numerics import eig_real_nonsymmetric, expm, gauss_pole_overlap, integrate_adaptive
from .pulses import SQRT_2PI, probe_envelope_freq
from .sle import coherence_rowsum, frequencies_along_chain
from .units import cm_to_rad

PATHS = ("analytic", "quadrature", "time-domain")
QUAD_HALF_WIDTH = 12.0  # probe truncation, in units of 1/sigma


@dataclass(frozen=True)
class Spectrum:
    shifts_cm: np.ndarray
    delay: float
    values: np.ndarray
    label: str = ""
    path: str = "analytic"

    def __post_init__(self):
        s = np.asarray(self.shifts_cm, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.ndim != 1 or s.shape != v.shape:
            raise ValueError("shift grid and values must be 1-D of equal length")
        if s.size > 1 and np.any(np.diff(s) <= 0):
            raise ValueError("shift grid must be strictly ascending")
        if not np.all(np.isfinite(v)):
            bad = int(np.argmax(~np.isfinite(v)))
            raise NonFiniteResult(
                f"non-finite intensity at shift {s[bad]:g} cm^-1, delay {self.delay:g} s",
                shift_cm=float(s[bad]), delay=self.delay,
            )
        object.__setattr__(self, "shifts_cm", s)
        object.__setattr__(self, "values", v)


def resolve_workers(workers=None):
    """Worker count: explicit value, else ``SLE_RAMAN_THREADS`` (0 = auto)."""
    if workers is None:
        raw = os.environ.get("SLE_RAMAN_THREADS", "0").strip() or "0"
        try:
            workers = int(raw)
        except ValueError:
            raise ValueError(f"SLE_RAMAN_THREADS must be an integer, got {raw!r}") from None
    if workers < 0:
        raise ValueError("worker count must be >= 0")
    if workers == 0:
        workers = os.cpu_count() or 1
    return workers


def _map(fn, items, workers):
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


# -- overlap of the probe spectrum with the population transform ------------

@dataclass(frozen=True)
class OverlapKernel:
    """Partial fractions ``rho_s(-D) = -i sum_j W[s, j] / (i D + poles[j])``."""

    poles: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        poles = np.atleast_1d(np.asarray(self.poles, dtype=complex))
        w = np.asarray(self.weights, dtype=complex)
        if w.ndim == 1:
            w = w[None, :]
        if w.shape[1] != poles.size:
            raise ValueError("weights must have one column per pole")
        if np.any(poles.real <= 0):
            raise ValueError("every pole must have a positive real part (damped populations)")
        object.__setattr__(self, "poles", poles)
        object.__setattr__(self, "weights", w)

    def rho(self, delta):
        """Evaluate ``rho(-delta)``; shape ``(len(delta), N)``."""
        d = np.atleast_1d(np.asarray(delta, dtype=complex))
        return (-1j / (1j * d[:, None] + self.poles[None, :])) @ self.weights.T


def overlap_kernel(rates, gamma, p0):
    """Eigen-expand ``-i (i D + K + 2 gamma)^-1 p0``.

    Raises
    ------
    NoConvergence
        When ``K + 2 gamma`` cannot be diagonalized reliably.
    """
    K = rates.K if isinstance(rates, RateMatrix) else np.asarray(rates, dtype=float)
    a = K + 2.0 * gamma * np.eye(K.shape[0])
    dec = eig_real_nonsymmetric(a)
    c = dec.left_inverse @ np.asarray(p0, dtype=complex)
    return OverlapKernel(poles=dec.eigenvalues, weights=dec.right_vectors * c[None, :])


def _contour_shift(min_re, T):
    # lift the Delta line toward the nearest pole to undo exp(-min_re T)
    if T <= 0:
        return 0.0
    return max(0.0, min_re - 3.0 / T)


def overlap_integral(kernel, pulse, omega_rel, T, path="analytic", rtol=1e-10, chunk=32):
    """``I_s(w) = int dD/2pi E_p(w + D) exp(i D T) rho_s(-D)``; shape ``(len(w), N)``.

    ``path="analytic"`` sums closed-form Faddeeva terms per pole;
    ``path="quadrature"`` integrates the pole sum numerically over
    ``|D - D0| <= 12 / sigma`` on a contour lifted toward the poles.
    """
    omega_rel = np.atleast_1d(np.asarray(omega_rel, dtype=float))
    sigma = pulse.probe_sigma
    delta0 = pulse.probe_center_offset - omega_rel
    if path == "analytic":
        p = gauss_pole_overlap(kernel.poles, delta0, T, sigma)
        return pulse.probe_amplitude * (p @ kernel.weights.T)
    if path != "quadrature":
        raise ValueError(f"unknown overlap path {path!r}")
    eta = _contour_shift(float(kernel.poles.real.min()), T)
    pref = pulse.probe_amplitude * sigma * SQRT_2PI / (2.0 * np.pi)

    def integrand(u, d0):
        return _backend.pole_overlap_integrand(u, eta, d0, T, sigma, kernel.poles, pref)

    p = _quadrature_chunks(integrand, sigma, delta0, T, rtol, chunk)
    return p @ kernel.weights.T


def _quadrature_chunks(integrand, sigma, delta0, T, rtol, chunk):
    # integrate u = D - D0 over +/- 12/sigma, a chunk of the frequency grid at a time
    half = QUAD_HALF_WIDTH / sigma
    # about four oscillations of exp(i D T) per starting panel; the embedded
    # rule cannot resolve more, so wider panels would all be split anyway
    n_panels = max(1, int(np.ceil(2.0 * half * max(T, sigma) / (8.0 * np.pi))))
    out = []
    for start in range(0, delta0.size, chunk):
        d0 = delta0[start:start + chunk]
        out.append(integrate_adaptive(
            lambda u, d0=d0: integrand(u, d0), -half, half, tol=1e-300, rtol=rtol,
            reduce_axes=(1,), initial_panels=min(n_panels, 8192), max_nodes_per_call=2048,
            max_panels=400_000))
    return np.concatenate(out, axis=0)


def _resolvent_overlap(rates, gamma, p0, pulse, omega_rel, T, rtol, chunk=32):
    # eigen-free fallback: batched LU solves of (i D + K + 2 gamma) x = p0 at every node
    K = rates.K if isinstance(rates, RateMatrix) else np.asarray(rates, dtype=float)
    a = K + 2.0 * gamma * np.eye(K.shape[0])
    p0 = np.asarray(p0, dtype=complex)
    sigma = pulse.probe_sigma
    eta = _contour_shift(2.0 * gamma, T)
    pref = pulse.probe_amplitude * sigma * SQRT_2PI / (2.0 * np.pi)
    delta0 = pulse.probe_center_offset - np.atleast_1d(np.asarray(omega_rel, dtype=float))

    def integrand(u, d0):
        z = u + 1j * eta
        delta = d0[None, :] + z[:, None]
        env = pref * np.exp(-0.5 * (sigma * z[:, None]) ** 2 + 1j * delta * T)
        rho = -1j * _backend.shifted_solve(a, 1j * delta.ravel(), p0)
        return env[..., None] * rho.reshape(delta.shape + (-1,))

    return _quadrature_chunks(integrand, sigma, delta0, T, rtol, chunk)


# -- FSRS --------------------------------------------------------------------

class _FsrsPlan:
    """Delay-independent pieces of an FSRS sweep: resolvent row sums, probe
    spectrum and one overlap kernel per distinct dephasing rate."""

    def __init__(self, model, shifts_cm, path, rtol):
        self.model = model
        self.shifts_cm = np.asarray(shifts_cm, dtype=float)
        pulses = model.pulses
        self.omega_rel = pulses.detuning(cm_to_rad(self.shifts_cm))
        self.ep = probe_envelope_freq(pulses, self.omega_rel)
        self.scale = pulses.pump_amplitude ** 2 * pulses.actinic_amplitude ** 2
        self.rtol = rtol
        self.path = path
        self.groups = {}
        for mode, block in zip(model.modes, model.blocks()):
            g = coherence_rowsum(block, self.omega_rel)
            weight = mode.alpha ** 2 * mode.mu_ag ** 2
            acc = self.groups.setdefault(mode.gamma, np.zeros_like(g))
            acc += weight * g
        self.kernels = {}
        for gamma in self.groups:
            try:
                self.kernels[gamma] = overlap_kernel(model.rates, gamma, model.p0)
            except NoConvergence:
                self.kernels[gamma] = None
                self.path = "quadrature"

    def overlap(self, gamma, T):
        kernel = self.kernels[gamma]
        if kernel is None:
            return _resolvent_overlap(self.model.rates, gamma, self.model.p0,
                                      self.model.pulses, self.omega_rel, T, self.rtol)
        return overlap_integral(kernel, self.model.pulses, self.omega_rel, T,
                                path=self.path, rtol=self.rtol)

    def evaluate(self, T):
        if T < 0:
            values = np.zeros_like(self.shifts_cm)
        else:
            acc = np.zeros(self.omega_rel.shape, dtype=complex)
            for gamma, g in self.groups.items():
                acc += np.einsum("ms,ms->m", g, self.overlap(gamma, T))
            values = np.imag(-2j * self.ep * self.scale * acc)
        return Spectrum(self.shifts_cm, float(T), values, self.model.label, self.path)


def fsrs_spectra(model, shifts_cm, delays, path="analytic", workers=None, rtol=1e-10):
    """FSRS spectra for several delays, evaluated concurrently over delays.

    Results come back in the order of ``delays`` whatever the worker count.
    """
    if path not in PATHS:
        raise ValueError(f"unknown path {path!r}; expected one of {PATHS}")
    if path == "time-domain":
        return [fsrs_spectrum_time_domain(model, shifts_cm, T) for T in delays]
    plan = _FsrsPlan(model, shifts_cm, path, rtol)
    return _map(plan.evaluate, [float(T) for T in delays], resolve_workers(workers))


def fsrs_spectrum(model, shifts_cm, T, path="analytic", rtol=1e-10):
    """Frequency-domain FSRS spectrum at delay ``T`` (s).

    ``path`` selects the overlap evaluation; if ``K + 2 gamma`` resists
    diagonalization the quadrature route is taken and recorded in
    ``Spectrum.path``.
    """
    return fsrs_spectra(model, shifts_cm, [T], path=path, workers=1, rtol=rtol)[0]


def fsrs_spectrum_time_domain(model, shifts_cm, T, rtol=1e-9, t1_span=20.0, t2_span=12.0):
    """FSRS from the double time integral of the matter correlation function.

    The integrand is a matrix product, so the ``(t1, t2)`` integral splits
    into a coherence integral over ``[0, t1_span / gamma]`` and a
    probe-weighted population integral over ``T +/- t2_span sigma``.  Both
    use adaptive quadrature of matrix exponentials only.
    """
    shifts_cm = np.asarray(shifts_cm, dtype=float)
    if T < 0:
        return Spectrum(shifts_cm, float(T), np.zeros_like(shifts_cm), model.label, "time-domain")
    pulses = model.pulses
    sigma = pulses.probe_sigma
    omega_rel = pulses.detuning(cm_to_rad(shifts_cm))
    delta0 = pulses.probe_center_offset - omega_rel
    n = model.N
    ones = np.ones(n)
    acc = np.zeros(omega_rel.shape, dtype=complex)
    i2_cache = {}
    for mode, block in zip(model.modes, model.blocks()):
        gamma = mode.gamma
        shift = 1j * mode.omega1

        def f1(t, block=block, shift=shift):
            rows = np.array([ones @ expm((block.M - shift * np.eye(n)) * tk) for tk in t])
            phase = np.exp(1j * np.outer(t, omega_rel + mode.omega1))
            return -1j * phase[:, :, None] * rows[:, None, :]

        t1_end = t1_span / gamma
        i1 = integrate_adaptive(f1, 0.0, t1_end, tol=1e-300, rtol=rtol, reduce_axes=(0, 1),
                                initial_panels=64, max_nodes_per_call=512)
        if gamma not in i2_cache:
            a = -(model.rates.K + 2.0 * gamma * np.eye(n))
            p0 = model.p0

            def f2(t, a=a, p0=p0):
                pops = np.array([expm(a * tk) @ p0 for tk in t])
                win = np.exp(-1j * np.outer(t - T, delta0) - 0.5 * ((t[:, None] - T) / sigma) ** 2)[:, :, None]
                return -1j * win * pops[:, None, :]

            lo = max(0.0, T - t2_span * sigma)
            hi = T + t2_span * sigma
            i2_cache[gamma] = pulses.probe_amplitude * integrate_adaptive(
                f2, lo, hi, tol=1e-300, rtol=rtol, reduce_axes=(0, 1),
                initial_panels=16, max_nodes_per_call=512)
        acc += mode.alpha ** 2 * mode.mu_ag ** 2 * np.einsum("ms,ms->m", i1, i2_cache[gamma])
    ep = probe_envelope_freq(pulses, omega_rel)
    scale = pulses.pump_amplitude ** 2 * pulses.actinic_amplitude ** 2
    values = np.imag(2.0 * (-1j) * ep * scale * acc)
    return Spectrum(shifts_cm, float(T), values, model.label, "time-domain")


def static_limit_spectrum(model, shifts_cm, T):
    """Population-snapshot average of frozen-bath absorptive lines.

    ``S = -2 |E_p|^2 |E_1|^2 sum_modes alpha^2 sum_s Im[1/(w + w_s + i gamma)] P_s(T)``
    with ``P(T) = exp(-K T) p0``.
    """
    shifts_cm = np.asarray(shifts_cm, dtype=float)
    if T < 0:
        return Spectrum(shifts_cm, float(T), np.zeros_like(shifts_cm), model.label, "static")
    pulses = model.pulses
    omega_rel = pulses.detuning(cm_to_rad(shifts_cm))
    pops = propagate(model.rates, model.p0, [T]).populations[:, 0]
    ep = probe_envelope_freq(pulses, omega_rel)
    acc = np.zeros(omega_rel.shape)
    for mode in model.modes:
        w_s = frequencies_along_chain(mode, model.N)
        lines = np.imag(1.0 / (omega_rel[:, None] + w_s[None, :] + 1j * mode.gamma))
        acc += mode.alpha ** 2 * mode.mu_ag ** 2 * (lines @ pops)
    scale = pulses.pump_amplitude ** 2 * pulses.actinic_amplitude ** 2
    return Spectrum(shifts_cm, float(T), -2.0 * ep ** 2 * scale * acc, model.label, "static")


# -- TASP --------------------------------------------------------------------

def tasp_response(model, shifts_cm):
    """Delay-independent complex TASP amplitude ``C``; ``S(T) = Im[C exp(-i (w - w_1) T)]``.

    ``C = -2i E_p(w) E_1 sum_modes mu_ac^2 sum_s G_s(w) rho_s(w - w_1)`` where
    ``G_s`` is the coherence row sum at the absolute frequency and
    ``rho(x) = -i (-i x + K + 2 gamma)^-1 p0``.
    """
    shifts_cm = np.asarray(shifts_cm, dtype=float)
    pulses = model.pulses
    x = pulses.detuning(cm_to_rad(shifts_cm))
    omega = x + pulses.pump_frequency
    n = model.N
    acc = np.zeros(x.shape, dtype=complex)
    rho_cache = {}
    for mode, block in zip(model.modes, model.blocks()):
        if mode.gamma not in rho_cache:
            a = model.rates.K + 2.0 * mode.gamma * np.eye(n)
            rho_cache[mode.gamma] = -1j * _backend.shifted_solve(a, -1j * x, model.p0)
        g = coherence_rowsum(block, omega)
        acc += mode.mu_ac ** 2 * mode.mu_ag ** 2 * np.einsum("ms,ms->m", g, rho_cache[mode.gamma])
    scale = pulses.pump_amplitude * pulses.actinic_amplitude ** 2
    return -2j * probe_envelope_freq(pulses, x) * scale * acc


def tasp_spectra(model, shifts_cm, delays):
    """Transient absorption of the shaped probe for several delays."""
    shifts_cm = np.asarray(shifts_cm, dtype=float)
    x = model.pulses.detuning(cm_to_rad(shifts_cm))
    amp = tasp_response(model, shifts_cm)
    out = []
    for T in delays:
        T = float(T)
        values = np.zeros_like(shifts_cm) if T < 0 else np.imag(amp * np.exp(-1j * x * T))
        out.append(Spectrum(shifts_cm, T, values, model.label, "analytic"))
    return out


def tasp_spectrum(model, shifts_cm, T):
    return tasp_spectra(model, shifts_cm, [T])[0]
