"""Joint system-bath Liouvillian blocks and their Green's functions.

The vibrational coherence block of mode ``(a, c)`` couples to the bath as

    M = -K + i diag(w_ca^(1..N)) - gamma_a I,

and the population block is ``-(K + 2 gamma_a I)``.  The two sectors never
mix, so they are stored as separate matrices.  hbar = 1 and every ``-i``
of the propagators is carried explicitly.
"""

from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import SingularMatrix, SingularResolvent
from .kinetics import RateMatrix, initial_state
from .numerics import expm, inverse
from .pulses import PulseSet


@dataclass(frozen=True)
class VibrationalMode:
    """One vibrational pair ``(a, c)`` riding on the bath.

    Frequencies in rad/s.  ``alpha`` is the Raman polarizability weight,
    ``mu_ag`` the actinic transition dipole ``|V_ag|`` and ``mu_ac`` the
    vibrational transition dipole used by transient absorption.
    """

    omega1: float
    delta: float
    gamma: float
    alpha: float = 1.0
    mu_ag: float = 1.0
    mu_ac: float = 1.0

    def __post_init__(self):
        if not self.omega1 > 0:
            raise ValueError(f"omega1 must be positive, got {self.omega1!r}")
        if not self.gamma > 0:
            raise ValueError(f"gamma must be positive, got {self.gamma!r}")
        if not np.isfinite(self.delta):
            raise ValueError("delta must be finite")


def frequencies_along_chain(mode, n):
    """``w_ca^(s) = w_ca^(1) + delta (s - 1)`` for ``s = 1..n``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return mode.omega1 + mode.delta * np.arange(n)


@dataclass(frozen=True)
class CoherenceBlock:
    M: np.ndarray

    @property
    def N(self):
        return self.M.shape[0]


def coherence_block(rates, mode):
    K = _kmatrix(rates)
    n = K.shape[0]
    m = -K + 1j * np.diag(frequencies_along_chain(mode, n)) - mode.gamma * np.eye(n)
    m.setflags(write=False)
    return CoherenceBlock(M=m)


def _kmatrix(rates):
    return rates.K if isinstance(rates, RateMatrix) else np.asarray(rates, dtype=float)


def coherence_green_time(block, t):
    """``-i theta(t) exp(M t)``; zero for ``t < 0``."""
    if t < 0:
        return np.zeros_like(block.M, dtype=complex)
    return -1j * expm(block.M * t)


def coherence_green_freq(block, omega_tilde):
    """``-i (-i w I - M)^-1``, the transform of :func:`coherence_green_time`."""
    n = block.N
    try:
        return -1j * inverse(-1j * omega_tilde * np.eye(n) - block.M)
    except SingularMatrix as exc:
        raise SingularResolvent(str(exc)) from exc


def coherence_rowsum(block, omega_tilde):
    """``1^T G_ac(w)`` for every ``w`` in ``omega_tilde``; shape ``(len(w), N)``.

    Uses the batched kernel on the transposed system
    ``(-M^T - i w) y = 1``.
    """
    w = np.atleast_1d(np.asarray(omega_tilde, dtype=float))
    ones = np.ones(block.N, dtype=complex)
    y = _backend.shifted_solve(-block.M.T, -1j * w, ones)
    return -1j * y


def population_green_time(rates, gamma, t):
    """``-i theta(t) exp(-(K + 2 gamma) t)``."""
    K = _kmatrix(rates)
    if t < 0:
        return np.zeros(K.shape, dtype=complex)
    return -1j * expm(-(K + 2.0 * gamma * np.eye(K.shape[0])) * t)


@dataclass(frozen=True)
class SLEModel:
    """Bath, modes and pulses; the immutable input of every signal.

    ``p0`` defaults to all population in the first bath state.
    """

    rates: RateMatrix
    modes: tuple
    pulses: PulseSet = field(default_factory=PulseSet)
    p0: np.ndarray = None
    label: str = ""

    def __post_init__(self):
        object.__setattr__(self, "modes", tuple(self.modes))
        if not self.modes:
            raise ValueError("at least one vibrational mode is required")
        n = self.rates.N
        p0 = initial_state(n) if self.p0 is None else np.array(self.p0, dtype=float)
        if p0.shape != (n,) or np.any(p0 < 0) or abs(p0.sum() - 1.0) > 1e-12:
            raise ValueError("p0 must be a probability vector over the bath states")
        p0.setflags(write=False)
        object.__setattr__(self, "p0", p0)

    @property
    def N(self):
        return self.rates.N

    def blocks(self):
        return [coherence_block(self.rates, m) for m in self.modes]

    def with_modes(self, modes):
        return SLEModel(self.rates, tuple(modes), self.pulses, self.p0, self.label)


def matter_correlation(model, t1, t2):
    """Matter correlation ``F(t1, t2)``.

    ``F = -i sum_modes alpha^2 |V_ag|^2 1^T G_ac(t1) G_aa(t2) p0``; the three
    ``-i`` factors combine to ``+i`` times the damped propagators.
    """
    if t1 < 0 or t2 < 0:
        return 0j
    total = 0j
    cache = {}
    for mode, block in zip(model.modes, model.blocks()):
        key = mode.gamma
        if key not in cache:
            cache[key] = population_green_time(model.rates, mode.gamma, t2) @ model.p0
        g = coherence_green_time(block, t1)
        total += mode.alpha ** 2 * mode.mu_ag ** 2 * (np.ones(model.N) @ g @ cache[key])
    return -1j * total
