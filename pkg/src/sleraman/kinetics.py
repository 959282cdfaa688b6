"""Markovian bath kinetics: the linear reaction chain and its propagators.

Convention: populations obey ``d rho / dt = -K rho``.  Physical rates sit on
the diagonal of ``K`` with a positive sign and every column sums to zero.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidRate, SingularMatrix, SingularResolvent
from .numerics import eig_real_nonsymmetric, expm, lu_solve


@dataclass(frozen=True)
class RateMatrix:
    """Generator of a nearest-neighbour jump chain.

    ``forward[i]`` is the rate from state ``i`` to ``i + 1`` (0-based) and
    ``backward[i]`` the reverse rate, both in s^-1.
    """

    forward: np.ndarray
    backward: np.ndarray
    K: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        fwd = np.asarray(self.forward, dtype=float)
        bwd = np.asarray(self.backward, dtype=float)
        if fwd.shape != bwd.shape or fwd.ndim != 1:
            raise ValueError("forward and backward rates must be 1-D and equal length")
        if np.any(fwd <= 0) or not np.all(np.isfinite(fwd)):
            bad = int(np.argmax(~(fwd > 0)))
            raise InvalidRate(f"forward rate k{bad + 1} = {fwd[bad]!r} is not positive")
        if np.any(bwd < 0) or not np.all(np.isfinite(bwd)):
            raise InvalidRate("backward rates must be finite and nonnegative")
        n = fwd.size + 1
        k = np.zeros((n, n))
        for i in range(n - 1):
            k[i, i] += fwd[i]
            k[i + 1, i] -= fwd[i]
            k[i + 1, i + 1] += bwd[i]
            k[i, i + 1] -= bwd[i]
        k.setflags(write=False)
        fwd.setflags(write=False)
        bwd.setflags(write=False)
        object.__setattr__(self, "forward", fwd)
        object.__setattr__(self, "backward", bwd)
        object.__setattr__(self, "K", k)

    @property
    def N(self):
        return self.K.shape[0]

    @classmethod
    def static(cls, n):
        """A bath with ``n`` frozen states (no jumps); ``K`` is the zero matrix."""
        obj = object.__new__(cls)
        object.__setattr__(obj, "forward", np.zeros(max(n - 1, 0)))
        object.__setattr__(obj, "backward", np.zeros(max(n - 1, 0)))
        k = np.zeros((n, n))
        k.setflags(write=False)
        object.__setattr__(obj, "K", k)
        return obj


def chain_rates(n, k1, k_last):
    """Forward rates varying linearly from ``k1`` to ``k_last`` over ``n - 1`` links."""
    if n < 2:
        raise ValueError("a chain needs at least two states")
    if n == 2:
        if k_last != k1:
            raise ValueError("a two-state chain has a single forward rate; k1 and k_last must agree")
        return np.array([float(k1)])
    i = np.arange(1, n)
    return k1 + (k_last - k1) / (n - 2) * (i - 1)


def build_chain(n, k1, k_last, backward_ratio=0.1):
    """Linear chain ``1 <-> 2 <-> ... <-> n`` with ``k_-i = backward_ratio * k_i``.

    For ``n = 10`` the spacing ``(k_last - k1) / 8`` reproduces the
    ten-state chain exactly.

    Raises
    ------
    InvalidRate
        If any forward rate is not positive or the ratio is negative.
    """
    if not k1 > 0 or not k_last > 0:
        raise InvalidRate(f"forward rates must be positive (k1={k1!r}, k_last={k_last!r})")
    if not backward_ratio >= 0:
        raise InvalidRate(f"backward ratio must be nonnegative, got {backward_ratio!r}")
    fwd = chain_rates(n, k1, k_last)
    return RateMatrix(forward=fwd, backward=backward_ratio * fwd)


def initial_state(n, state=0):
    p0 = np.zeros(n)
    p0[state] = 1.0
    return p0


@dataclass(frozen=True)
class PopulationTrajectory:
    times: np.ndarray
    populations: np.ndarray  # shape (N, len(times))


def _check_probability(p0, n):
    p0 = np.asarray(p0, dtype=float)
    if p0.shape != (n,):
        raise ValueError(f"initial populations must have shape ({n},)")
    if np.any(p0 < 0) or abs(p0.sum() - 1.0) > 1e-12:
        raise ValueError("initial populations must be nonnegative and sum to 1")
    return p0


def propagate(rates, p0, times, method="expm"):
    """Populations ``exp(-K t) p0`` at each requested time.

    ``method="eigen"`` uses the eigendecomposition of ``K`` instead of the
    matrix exponential; both must agree to round-off.
    """
    K = rates.K if isinstance(rates, RateMatrix) else np.asarray(rates, dtype=float)
    n = K.shape[0]
    p0 = _check_probability(p0, n)
    times = np.atleast_1d(np.asarray(times, dtype=float))
    if np.any(times < 0) or np.any(np.diff(times) < 0):
        raise ValueError("times must be nonnegative and ascending")
    out = np.empty((n, times.size))
    if method == "expm":
        for j, t in enumerate(times):
            out[:, j] = (expm(-K * t) @ p0).real if t > 0 else p0
    elif method == "eigen":
        dec = eig_real_nonsymmetric(K)
        c = dec.left_inverse @ p0
        for j, t in enumerate(times):
            out[:, j] = (dec.right_vectors @ (np.exp(-dec.eigenvalues * t) * c)).real
    else:
        raise ValueError(f"unknown method {method!r}")
    return PopulationTrajectory(times=times, populations=out)


def population_resolvent(rates, gamma_a, p0, delta):
    """Fourier-transformed damped populations ``-i (i Delta + K + 2 gamma_a)^-1 p0``.

    This is ``G_aa,aa(-Delta) |rho_0>`` with the transform
    ``G(w) = int dt exp(i w t) G(t)``.
    """
    K = rates.K if isinstance(rates, RateMatrix) else np.asarray(rates, dtype=float)
    n = K.shape[0]
    if gamma_a < 0:
        raise ValueError("gamma_a must be nonnegative")
    a = 1j * delta * np.eye(n) + K + 2.0 * gamma_a * np.eye(n)
    if gamma_a == 0:
        ev = np.linalg.eigvals(K)
        scale = max(1.0, float(np.abs(K).max()), abs(delta))
        if np.any(np.abs(1j * delta + ev) < 1e-12 * scale):
            raise SingularResolvent(f"undamped bath mode hit at Delta = {delta!r}")
    try:
        return -1j * lu_solve(a, np.asarray(p0, dtype=complex))
    except SingularMatrix as exc:
        raise SingularResolvent(str(exc)) from exc
