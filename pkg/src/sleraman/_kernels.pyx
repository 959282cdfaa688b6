# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels; same signatures as ``_fallback``.

Loops release the GIL so grid chunks can run on worker threads.
"""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cos, sin, sqrt, fabs, M_PI
from libc.stdlib cimport malloc, free

cnp.import_array()

ctypedef double complex cplx

cdef double SQRT_PI = sqrt(M_PI)
cdef double SQRT_HALF_PI = sqrt(0.5 * M_PI)


cdef inline cplx cexp_(cplx z) noexcept nogil:
    cdef double r = exp(z.real)
    return r * cos(z.imag) + 1j * (r * sin(z.imag))


cdef inline double cabs2(cplx z) noexcept nogil:
    return z.real * z.real + z.imag * z.imag


cdef inline cplx weideman(cplx z, const double *c, int nc, double L) noexcept nogil:
    cdef cplx den = L - 1j * z
    cdef cplx zz = (L + 1j * z) / den
    cdef cplx p = 0.0
    cdef int k
    for k in range(nc):
        p = p * zz + c[k]
    return 2.0 * p / (den * den) + (1.0 / SQRT_PI) / den


def faddeeva_upper(z, coeffs, double L):
    cdef cnp.ndarray[cplx, ndim=1] zf = np.ascontiguousarray(np.ravel(z), dtype=complex)
    cdef cnp.ndarray[double, ndim=1] c = np.ascontiguousarray(coeffs, dtype=float)
    cdef Py_ssize_t n = zf.shape[0], i
    cdef cnp.ndarray[cplx, ndim=1] out = np.empty(n, dtype=complex)
    cdef int nc = c.shape[0]
    with nogil:
        for i in range(n):
            out[i] = weideman(zf[i], &c[0], nc, L)
    return out.reshape(np.shape(z))


def gauss_pole_overlap(poles, delta0, double T, double sigma, coeffs, double L):
    cdef cnp.ndarray[cplx, ndim=1] lam = np.ascontiguousarray(poles, dtype=complex)
    cdef cnp.ndarray[double, ndim=1] d0 = np.ascontiguousarray(delta0, dtype=float)
    cdef cnp.ndarray[double, ndim=1] c = np.ascontiguousarray(coeffs, dtype=float)
    cdef Py_ssize_t M = d0.shape[0], P = lam.shape[0], m, j
    cdef cnp.ndarray[cplx, ndim=2] out = np.empty((M, P), dtype=complex)
    cdef int nc = c.shape[0]
    cdef double s2 = sigma * sigma
    cdef double inv = 1.0 / (sigma * sqrt(2.0))
    cdef double gmag = exp(-T * T / (2.0 * s2))
    cdef cplx a, z, gp, val, pref = -1j * sigma * SQRT_HALF_PI
    with nogil:
        for m in range(M):
            gp = gmag * (cos(d0[m] * T) + 1j * sin(d0[m] * T))
            for j in range(P):
                a = lam[j] + 1j * d0[m]
                z = (a * s2 - T) * inv
                if z.real >= 0.0:
                    val = gp * weideman(1j * z, &c[0], nc, L)
                else:
                    val = 2.0 * cexp_(-lam[j] * T + 0.5 * a * a * s2)
                    if gmag != 0.0:
                        val = val - gp * weideman(-1j * z, &c[0], nc, L)
                out[m, j] = pref * val
    return out


cdef int solve_inplace(cplx *a, cplx *x, int n) noexcept nogil:
    # row-major a (n x n), partial pivoting; returns -1 on a vanished pivot
    cdef int i, j, k, p
    cdef double best, mag
    cdef cplx t, f
    for k in range(n):
        p = k
        best = cabs2(a[k * n + k])
        for i in range(k + 1, n):
            mag = cabs2(a[i * n + k])
            if mag > best:
                best = mag
                p = i
        if sqrt(best) < 1e-300:
            return -1
        if p != k:
            for j in range(n):
                t = a[k * n + j]
                a[k * n + j] = a[p * n + j]
                a[p * n + j] = t
            t = x[k]
            x[k] = x[p]
            x[p] = t
        for i in range(k + 1, n):
            f = a[i * n + k] / a[k * n + k]
            if f != 0:
                for j in range(k, n):
                    a[i * n + j] = a[i * n + j] - f * a[k * n + j]
                x[i] = x[i] - f * x[k]
    for i in range(n - 1, -1, -1):
        t = x[i]
        for j in range(i + 1, n):
            t = t - a[i * n + j] * x[j]
        x[i] = t / a[i * n + i]
    return 0


def shifted_solve(a0, shifts, rhs):
    """Solve ``(A0 + s_k I) x_k = rhs`` for every complex shift ``s_k``.

    Returns shape ``(len(shifts), N)``.
    """
    cdef cnp.ndarray[cplx, ndim=2] mm = np.ascontiguousarray(a0, dtype=complex)
    cdef cnp.ndarray[cplx, ndim=1] w = np.ascontiguousarray(np.ravel(shifts), dtype=complex)
    cdef cnp.ndarray[cplx, ndim=1] b = np.ascontiguousarray(rhs, dtype=complex)
    cdef int n = mm.shape[0]
    cdef Py_ssize_t K = w.shape[0], k
    cdef int i, j, status = 0
    cdef cnp.ndarray[cplx, ndim=2] out = np.empty((K, n), dtype=complex)
    cdef cplx *a = <cplx *> malloc(n * n * sizeof(cplx))
    cdef cplx *x = <cplx *> malloc(n * sizeof(cplx))
    if a == NULL or x == NULL:
        free(a)
        free(x)
        raise MemoryError()
    try:
        with nogil:
            for k in range(K):
                for i in range(n):
                    for j in range(n):
                        a[i * n + j] = mm[i, j]
                    a[i * n + i] = a[i * n + i] + w[k]
                    x[i] = b[i]
                if solve_inplace(a, x, n) != 0:
                    status = -1
                    break
                for i in range(n):
                    out[k, i] = x[i]
    finally:
        free(a)
        free(x)
    if status != 0:
        from .errors import SingularResolvent
        raise SingularResolvent("pivot vanished in shifted solve")
    return out


def pole_overlap_integrand(u, double eta, delta0, double T, double sigma, poles, double pref):
    """Integrand of the Gaussian x simple-pole overlap on the lifted contour.

    ``out[n, m, j] = pref exp(-sigma^2 z^2 / 2 + i (d0 + z) T) (-i) / (i (d0 + z) + poles[j])``
    with ``z = u[n] + i eta`` and ``d0 = delta0[m]``.
    """
    cdef cnp.ndarray[double, ndim=1] uu = np.ascontiguousarray(u, dtype=float)
    cdef cnp.ndarray[double, ndim=1] d0 = np.ascontiguousarray(delta0, dtype=float)
    cdef cnp.ndarray[cplx, ndim=1] lam = np.ascontiguousarray(poles, dtype=complex)
    cdef Py_ssize_t n = uu.shape[0], M = d0.shape[0], P = lam.shape[0], a, m, j
    cdef cnp.ndarray[cplx, ndim=3] out = np.empty((n, M, P), dtype=complex)
    cdef cplx z, d, env, s, q
    cdef double s2 = sigma * sigma, inv
    with nogil:
        for a in range(n):
            z = uu[a] + 1j * eta
            for m in range(M):
                d = d0[m] + z
                env = pref * cexp_(-0.5 * s2 * z * z + 1j * d * T)
                s = -1j * env
                for j in range(P):
                    # s / q spelled out; the operands never approach overflow
                    q = 1j * d + lam[j]
                    inv = 1.0 / (q.real * q.real + q.imag * q.imag)
                    out[a, m, j] = s * (q.real - 1j * q.imag) * inv
    return out
