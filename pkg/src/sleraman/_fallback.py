"""Pure-numpy implementations of the hot kernels.

Mirrors ``_kernels.pyx`` function for function; selected by ``_backend``
when the compiled extension is missing or ``SLE_RAMAN_PURE_PYTHON=1``.
"""

import math

import numpy as np

_SQRT_PI = math.sqrt(math.pi)
_SQRT_HALF_PI = math.sqrt(0.5 * math.pi)


def faddeeva_upper(z, coeffs, L):
    """Weideman rational approximation, valid for Im z >= 0."""
    z = np.asarray(z, dtype=complex)
    den = L - 1j * z
    zz = (L + 1j * z) / den
    p = np.zeros_like(zz)
    for a in coeffs:
        p = p * zz + a
    return 2.0 * p / den**2 + (1.0 / _SQRT_PI) / den


def gauss_pole_overlap(poles, delta0, T, sigma, coeffs, L):
    """Closed-form Gaussian-windowed simple-pole integrals.

    Returns ``P[m, j] = int dD/2pi Ep(D) exp(i D T) (-i)/(i D + poles[j])``
    where ``Ep`` is a unit-amplitude Gaussian spectrum of duration ``sigma``
    centred at ``delta0[m]``; shape ``(len(delta0), len(poles))``.
    """
    lam, d0 = np.broadcast_arrays(
        np.asarray(poles, dtype=complex)[None, :],
        np.asarray(delta0, dtype=float)[:, None],
    )
    a = lam + 1j * d0
    s2 = sigma * sigma
    z = (a * s2 - T) / (sigma * math.sqrt(2.0))
    gauss_phase = np.exp(1j * d0 * T - T * T / (2.0 * s2))
    out = np.empty(z.shape, dtype=complex)
    upper = z.real >= 0.0
    out[upper] = gauss_phase[upper] * faddeeva_upper(1j * z[upper], coeffs, L)
    lower = ~upper
    if np.any(lower):
        # erfc(z) = 2 - erfc(-z) keeps the Faddeeva argument in the upper half-plane
        al = a[lower]
        direct = 2.0 * np.exp(-lam[lower] * T + 0.5 * al * al * s2)
        gp = gauss_phase[lower]
        tail = np.zeros_like(direct)
        live = gp != 0.0
        tail[live] = gp[live] * faddeeva_upper(-1j * z[lower][live], coeffs, L)
        out[lower] = direct - tail
    return -1j * sigma * _SQRT_HALF_PI * out


def shifted_solve(a0, shifts, rhs):
    """Solve ``(A0 + s_k I) x_k = rhs`` for every complex shift ``s_k``.

    Returns shape ``(len(shifts), N)``.
    """
    a0 = np.asarray(a0, dtype=complex)
    rhs = np.asarray(rhs, dtype=complex)
    shifts = np.ravel(np.asarray(shifts, dtype=complex))
    ident = np.eye(a0.shape[0], dtype=complex)
    out = np.empty((shifts.size, a0.shape[0]), dtype=complex)
    for k, s in enumerate(shifts):
        out[k] = _solve(a0 + s * ident, rhs)
    return out


def _solve(a, b):
    # Partial-pivoting LU, in place on copies; n is small.
    a = a.copy()
    x = b.copy()
    n = a.shape[0]
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) < 1e-300:
            from .errors import SingularResolvent
            raise SingularResolvent(f"pivot {k} vanished")
        if p != k:
            a[[k, p]] = a[[p, k]]
            x[[k, p]] = x[[p, k]]
        f = a[k + 1:, k] / a[k, k]
        a[k + 1:, k:] -= np.outer(f, a[k, k:])
        x[k + 1:] -= f * x[k]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - a[i, i + 1:] @ x[i + 1:]) / a[i, i]
    return x


def pole_overlap_integrand(u, eta, delta0, T, sigma, poles, pref):
    """Integrand of the Gaussian x simple-pole overlap on the lifted contour.

    ``out[n, m, j] = pref exp(-sigma^2 z^2 / 2 + i (d0 + z) T) (-i) / (i (d0 + z) + poles[j])``
    with ``z = u[n] + i eta`` and ``d0 = delta0[m]``.
    """
    z = np.asarray(u, dtype=float) + 1j * eta
    d = np.asarray(delta0, dtype=float)[None, :] + z[:, None]
    env = pref * np.exp(-0.5 * sigma ** 2 * z[:, None] ** 2 + 1j * d * T)
    poles = np.asarray(poles, dtype=complex)
    return (-1j * env)[..., None] / (1j * d[..., None] + poles[None, None, :])
