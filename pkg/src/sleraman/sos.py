"""Sum-over-states signals for a bath-free multilevel system.

Transient absorption and FSRS of a prepared coherence ``rho_ac``, plus the
three- and four-wave-mixing generalized susceptibilities.  Liouville pair
``|ij>>`` is stored at index ``i * n + j``; ``G(w)`` is diagonal there with
entries ``1 / (w - w_ij + i gamma_ij)``.
"""

from dataclasses import dataclass

import numpy as np

from .numerics import gauss_pole_overlap, integrate_adaptive
from .pulses import gaussian_spectrum, probe_envelope_freq

DIAGRAMS = ("i", "ii")


@dataclass(frozen=True)
class EigenstateSystem:
    """Levels with energies (rad/s), dipoles, polarizabilities, dephasings
    ``gamma[i, j]`` and the prepared density matrix ``rho``."""

    energies: np.ndarray
    dipole: np.ndarray
    polarizability: np.ndarray
    dephasing: np.ndarray
    rho: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        e = np.asarray(self.energies, dtype=float)
        n = e.size
        mats = {}
        for name in ("dipole", "polarizability", "dephasing", "rho"):
            m = np.asarray(getattr(self, name), dtype=float if name == "dephasing" else complex)
            if m.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {m.shape}")
            if not np.all(np.isfinite(m)):
                raise ValueError(f"{name} has non-finite entries")
            mats[name] = m
        for name in ("dipole", "polarizability"):
            if not np.allclose(mats[name], mats[name].conj().T, rtol=0, atol=1e-14):
                raise ValueError(f"{name} must be conjugate-symmetric")
        g = mats["dephasing"]
        off = ~np.eye(n, dtype=bool)
        if np.any(g[off] <= 0):
            raise ValueError("dephasing rates between distinct levels must be positive")
        if np.any(np.diag(g) < 0):
            raise ValueError("population decay rates must be nonnegative")
        labels = tuple(self.labels) if self.labels else tuple(str(i) for i in range(n))
        if len(labels) != n:
            raise ValueError("one label per level")
        for name, m in mats.items():
            m.setflags(write=False)
            object.__setattr__(self, name, m)
        e.setflags(write=False)
        object.__setattr__(self, "energies", e)
        object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.energies.size

    @property
    def transition(self):
        """``w_ij = E_i - E_j``."""
        return self.energies[:, None] - self.energies[None, :]


def _den(sys, w):
    """Every resonance denominator ``w - w_ij + i gamma_ij``; shape ``w.shape + (n, n)``."""
    w = np.asarray(w, dtype=complex)
    return w[..., None, None] - sys.transition + 1j * sys.dephasing


def _check_diagrams(diagrams):
    diagrams = tuple(diagrams)
    for d in diagrams:
        if d not in DIAGRAMS:
            raise ValueError(f"unknown diagram {d!r}; expected a subset of {DIAGRAMS}")
    return diagrams


def _real(z):
    out = 2.0 * np.imag(z)
    if not np.all(np.isfinite(out)):
        raise ArithmeticError("sum-over-states signal is not finite")
    return out


def tasp_sos(sys, pulses, omega_rel, T, diagrams=DIAGRAMS):
    """Transient absorption of the shaped probe, eigenstate expansion.

    ``omega_rel = w - w_1``; the absolute frequency adds ``pulses.pump_frequency``.

        (i)   -i  mu_da mu_cd rho_ac / [(w - w_ad + i g_ad)(w - w_1 - w_ac + i g_ac)]
        (ii)  +i  mu_cd mu_da rho_ac / [(w - w_dc + i g_dc)(w - w_1 - w_ac + i g_ac)]

    each multiplied by ``E_p(w) E_1 exp(-i (w - w_1) T)``; the signal is
    ``2 Im`` of the sum.
    """
    diagrams = _check_diagrams(diagrams)
    x = np.atleast_1d(np.asarray(omega_rel, dtype=float))
    omega = x + pulses.pump_frequency
    mu = sys.dipole
    rho = sys.rho
    pop = rho / _den(sys, x)  # rho_ac / (w - w_1 - w_ac + i g_ac), indexed [m, a, c]
    den = _den(sys, omega)  # [m, i, j]
    total = np.zeros(x.shape, dtype=complex)
    if "i" in diagrams:
        # sum_acd mu_da mu_cd pop_ac / den_ad
        total += -1j * np.einsum("da,cd,mac,mad->m", mu, mu, pop, 1.0 / den)
    if "ii" in diagrams:
        total += 1j * np.einsum("cd,da,mac,mdc->m", mu, mu, pop, 1.0 / den)
    field = probe_envelope_freq(pulses, x) * pulses.pump_amplitude * np.exp(-1j * x * T)
    return _real(field * total)


def fsrs_sos(sys, pulses, omega_rel, T, diagrams=DIAGRAMS):
    """Stimulated Raman signal, eigenstate expansion.

        (i)   +i  alpha_cd alpha_da rho_ac / (w - w_1 - w_dc + i g_dc)
        (ii)  -i  alpha_da alpha_cd rho_ac / (w - w_1 - w_ad + i g_ad)

    each multiplied by the probe overlap
    ``int dD/2pi E_p(w + D) exp(i D T) / (-D - w_ac + i g_ac)``, which is a
    single-pole Gaussian overlap at ``lambda = g_ac + i w_ac``.  The prefactor
    is ``E_p(w) |E_1|^2``; the signal is ``2 Im`` of the sum.
    """
    diagrams = _check_diagrams(diagrams)
    x = np.atleast_1d(np.asarray(omega_rel, dtype=float))
    al = sys.polarizability
    n = sys.n
    occupied = np.abs(sys.rho) > 0
    poles = (sys.dephasing + 1j * sys.transition)[occupied]
    if np.any(poles.real <= 0):
        raise ValueError("every prepared element needs a positive decay rate")
    delta0 = pulses.probe_center_offset - x
    over = np.zeros(x.shape + (n, n), dtype=complex)
    if poles.size:
        over[:, occupied] = pulses.probe_amplitude * gauss_pole_overlap(
            poles, delta0, T, pulses.probe_sigma)
    weighted = sys.rho[None] * over  # rho_ac O_ac, [m, a, c]
    den = _den(sys, x)
    total = np.zeros(x.shape, dtype=complex)
    if "i" in diagrams:
        total += 1j * np.einsum("cd,da,mac,mdc->m", al, al, weighted, 1.0 / den)
    if "ii" in diagrams:
        total += -1j * np.einsum("da,cd,mac,mad->m", al, al, weighted, 1.0 / den)
    field = probe_envelope_freq(pulses, x) * pulses.pump_amplitude ** 2
    return _real(field * total)


def pole_inventory(sys, signal):
    """Distinct resonance positions the expansion can produce.

    Returned as a sorted list of ``(argument, i, j)`` with ``argument`` one
    of ``"w"`` (absolute probe frequency), ``"w-w1"`` or ``"D"`` (probe
    overlap variable) and the complex pole location ``w_ij - i gamma_ij``
    reachable through that argument.
    """
    n = sys.n
    rng = range(n)
    if signal == "tasp":
        pairs = {("w-w1", a, c) for a in rng for c in rng}
        pairs |= {("w", a, d) for a in rng for d in rng}
        pairs |= {("w", d, c) for d in rng for c in rng}
    elif signal == "fsrs":
        pairs = {("D", a, c) for a in rng for c in rng}
        pairs |= {("w-w1", d, c) for d in rng for c in rng}
        pairs |= {("w-w1", a, d) for a in rng for d in rng}
    else:
        raise ValueError(f"unknown signal {signal!r}")
    return sorted(pairs)


# -- three- and four-wave mixing ---------------------------------------------

def liouville_left(a):
    """Superoperator ``X -> A X`` on row-major vectorized matrices."""
    a = np.asarray(a, dtype=complex)
    return np.kron(a, np.eye(a.shape[0]))


def liouville_right(a):
    """Superoperator ``X -> X A``."""
    a = np.asarray(a, dtype=complex)
    return np.kron(np.eye(a.shape[0]), a.T)


def _chain_frequencies(omega, omegas):
    # G(w), G(w - w_last), G(w - w_last - w_prev), ...
    out = [omega]
    acc = omega
    for wp in reversed(omegas):
        acc = acc - wp
        out.append(acc)
    return out


def generalized_susceptibility(sys, omega, omegas):
    """``<V_L G(w) V_- G(w - w_k) ... V_- G(w - sum w')>'`` by Liouville matrices.

    ``omegas`` are ``(w_1', ..., w_k')``; the commutator chain has ``k`` links.
    """
    n = sys.n
    vl = liouville_left(sys.dipole)
    vm = vl - liouville_right(sys.dipole)
    freqs = _chain_frequencies(omega, list(omegas))
    vec = sys.rho.reshape(n * n)
    vec = vec / _den(sys, freqs[-1]).reshape(n * n)
    for w in reversed(freqs[:-1]):
        vec = vm @ vec
        vec = vec / _den(sys, w).reshape(n * n)
    vec = vl @ vec
    return np.eye(n).reshape(n * n) @ vec


def generalized_susceptibility_hilbert(sys, omega, omegas):
    """Same chain evaluated with matrix products and commutators in Hilbert space."""
    v = sys.dipole
    freqs = _chain_frequencies(omega, list(omegas))
    x = sys.rho / _den(sys, freqs[-1])
    for w in reversed(freqs[:-1]):
        x = (v @ x - x @ v) / _den(sys, w)
    return np.trace(v @ x)


def chi2_twm(sys, omega, omega1p, omega2p):
    """Second-order generalized susceptibility ``chi(-w; w1', w2')``."""
    return generalized_susceptibility(sys, omega, (omega1p, omega2p))


def chi3_fwm(sys, omega, omega1p, omega2p, omega3p):
    """Third-order generalized susceptibility ``chi(-w; w1', w2', w3')``."""
    return generalized_susceptibility(sys, omega, (omega1p, omega2p, omega3p))


@dataclass(frozen=True)
class GaussianPulse:
    """Field ``amplitude exp(-t^2 / 2 sigma^2 - i center t)`` around its own delay."""

    center: float
    sigma: float
    amplitude: float = 1.0

    def spectrum(self, omega):
        return self.amplitude * gaussian_spectrum(self.center, self.sigma, omega)


def _wave_mixing_signal(sys, omega, T, pulses, delays, span, rtol):
    probe = pulses[0]
    fields = pulses[1:]

    def nested(level, fixed):
        f = fields[level]
        lo, hi = f.center - span / f.sigma, f.center + span / f.sigma

        def integrand(ws):
            out = np.empty(ws.size, dtype=complex)
            for k, w in enumerate(ws):
                args = fixed + (w,)
                if level + 1 < len(fields):
                    inner = nested(level + 1, args)
                else:
                    inner = generalized_susceptibility(sys, omega, args)
                out[k] = f.spectrum(w) * np.exp(1j * w * delays[level]) * inner / (2.0 * np.pi)
            return out

        return integrate_adaptive(integrand, lo, hi, tol=1e-300, rtol=rtol, order=16)

    total = nested(0, ())
    value = np.exp(-1j * omega * T) * np.conj(probe.spectrum(omega)) * total
    return 2.0 * np.imag(value)


def twm_signal(sys, omega, T, T1, T2, probe, field1, field2, span=6.0, rtol=1e-6):
    """Three-wave-mixing signal by nested quadrature over the two field spectra.

    Not tuned for speed; spectra are truncated at ``center +/- span / sigma``.
    """
    return _wave_mixing_signal(sys, omega, T, (probe, field1, field2), (T1, T2), span, rtol)


def fwm_signal(sys, omega, T, T1, T2, T3, probe, field1, field2, field3, span=6.0, rtol=1e-6):
    """Four-wave-mixing counterpart of :func:`twm_signal`."""
    return _wave_mixing_signal(sys, omega, T, (probe, field1, field2, field3),
                               (T1, T2, T3), span, rtol)


def system_from_sle(model):
    """Three-level ``(g, a, c_k...)`` system equivalent to a single-state-bath model.

    Level ``a`` carries the prepared population ``|E_a|^2 |V_ag|^2``; each
    mode contributes a level ``c_k`` at ``w_ca`` above ``a`` with coherence
    dephasing ``gamma`` and population decay ``2 gamma`` on ``a``.  The
    ground state sits far below and couples to nothing observed.
    """
    if model.N != 1:
        raise ValueError("only a single-state bath maps onto a bath-free system")
    gammas = {m.gamma for m in model.modes}
    mu_ag = {m.mu_ag for m in model.modes}
    if len(gammas) != 1 or len(mu_ag) != 1:
        raise ValueError("modes must share gamma and the actinic dipole")
    gamma = gammas.pop()
    k = len(model.modes)
    n = 2 + k
    energies = np.zeros(n)
    energies[0] = -1e16
    for i, mode in enumerate(model.modes):
        energies[2 + i] = mode.omega1
    dip = np.zeros((n, n))
    pol = np.zeros((n, n))
    deph = np.full((n, n), gamma)
    deph[np.diag_indices(n)] = 0.0
    deph[1, 1] = 2.0 * gamma
    for i, mode in enumerate(model.modes):
        dip[1, 2 + i] = dip[2 + i, 1] = mode.mu_ac
        pol[1, 2 + i] = pol[2 + i, 1] = mode.alpha
    rho = np.zeros((n, n), dtype=complex)
    rho[1, 1] = model.pulses.actinic_amplitude ** 2 * mu_ag.pop() ** 2
    labels = ("g", "a") + tuple(f"c{i + 1}" for i in range(k))
    return EigenstateSystem(energies, dip, pol, deph, rho, labels)
