"""Dense linear algebra on small complex matrices.

LU with partial pivoting, Pade scaling-and-squaring matrix exponential and
an eigendecomposition wrapper for real non-symmetric generators.  Matrices
here are at most a few dozen rows (bath states), so clarity wins over
blocking tricks.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, NoConvergence, SingularMatrix

PIVOT_FLOOR = 1e-300


def _square(a, name="A"):
    a = np.asarray(a)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"{name} must be square, got shape {a.shape}")
    return a


def lu_factor(a):
    """Factor ``P A = L U`` with partial pivoting.

    Returns the packed factors (unit lower triangle below the diagonal) and
    the row permutation as an index array.
    """
    lu = np.array(_square(a), dtype=complex, copy=True)
    n = lu.shape[0]
    perm = np.arange(n)
    for k in range(n):
        p = k + int(np.argmax(np.abs(lu[k:, k])))
        if abs(lu[p, k]) < PIVOT_FLOOR:
            raise SingularMatrix(f"pivot {k} has magnitude {abs(lu[p, k]):.3e}")
        if p != k:
            lu[[k, p]] = lu[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        if k + 1 < n:
            lu[k + 1:, k] /= lu[k, k]
            lu[k + 1:, k + 1:] -= np.outer(lu[k + 1:, k], lu[k, k + 1:])
    return lu, perm


def lu_substitute(lu, perm, b):
    """Solve with precomputed factors; ``b`` may be a vector or a matrix."""
    x = np.array(np.asarray(b)[perm], dtype=complex, copy=True)
    n = lu.shape[0]
    for i in range(1, n):
        x[i] -= lu[i, :i] @ x[:i]
    for i in range(n - 1, -1, -1):
        x[i] = (x[i] - lu[i, i + 1:] @ x[i + 1:]) / lu[i, i]
    return x


def lu_solve(a, b):
    """Solve ``A x = b`` by LU with partial pivoting.

    Raises
    ------
    SingularMatrix
        If a pivot magnitude drops below 1e-300.
    DimensionMismatch
        If ``A`` is not square or ``b`` has the wrong leading dimension.
    """
    a = _square(a)
    b = np.asarray(b)
    if b.shape[0] != a.shape[0]:
        raise DimensionMismatch(f"rhs has {b.shape[0]} rows, matrix has {a.shape[0]}")
    lu, perm = lu_factor(a)
    return lu_substitute(lu, perm, b)


def inverse(a):
    a = _square(a)
    return lu_solve(a, np.eye(a.shape[0], dtype=complex))


# Pade coefficients and 1-norm thresholds (Higham 2005, double precision).
_PADE = {
    3: (120.0, 60.0, 12.0, 1.0),
    5: (30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0),
    7: (17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0),
    9: (17643225600.0, 8821612800.0, 2075673600.0, 302702400.0, 30270240.0,
        2162160.0, 110880.0, 3960.0, 90.0, 1.0),
    13: (64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
         1187353796428800.0, 129060195264000.0, 10559470521600.0,
         670442572800.0, 33522128640.0, 1323241920.0, 40840800.0, 960960.0,
         16380.0, 182.0, 1.0),
}
_THETA = {
    3: 1.495585217958292e-2,
    5: 2.539398330063230e-1,
    7: 9.504178996162932e-1,
    9: 2.097847961257068e0,
    13: 5.371920351148152e0,
}


def _pade_low(a, m):
    b = _PADE[m]
    n = a.shape[0]
    ident = np.eye(n, dtype=a.dtype)
    a2 = a @ a
    u = b[1] * ident
    v = b[0] * ident
    power = ident
    for j in range(1, m // 2 + 1):
        power = power @ a2
        u = u + b[2 * j + 1] * power
        v = v + b[2 * j] * power
    return a @ u, v


def _pade13(a):
    b = _PADE[13]
    ident = np.eye(a.shape[0], dtype=a.dtype)
    a2 = a @ a
    a4 = a2 @ a2
    a6 = a4 @ a2
    u = a @ (a6 @ (b[13] * a6 + b[11] * a4 + b[9] * a2)
             + b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * ident)
    v = (a6 @ (b[12] * a6 + b[10] * a4 + b[8] * a2)
         + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * ident)
    return u, v


def expm(a):
    """Matrix exponential by scaling and squaring with a Pade approximant.

    The lowest Pade degree in {3, 5, 7, 9} whose 1-norm threshold covers
    ``A`` is used; otherwise ``A`` is scaled by ``2**-s`` into the degree-13
    range and the result squared back ``s`` times.
    """
    a = np.array(_square(a), dtype=complex)
    n = a.shape[0]
    if n == 0:
        return a
    norm1 = np.abs(a).sum(axis=0).max()
    if not np.isfinite(norm1):
        raise ValueError("expm input contains non-finite entries")
    s = 0
    for m in (3, 5, 7, 9):
        if norm1 <= _THETA[m]:
            u, v = _pade_low(a, m)
            break
    else:
        if norm1 > _THETA[13]:
            s = int(np.ceil(np.log2(norm1 / _THETA[13])))
            a = a / 2.0 ** s
        u, v = _pade13(a)
    r = lu_solve(v - u, v + u)
    for _ in range(s):
        r = r @ r
    return r


@dataclass(frozen=True)
class EigenDecomposition:
    """``A = V diag(eigenvalues) V^-1`` with the reconstruction residual."""

    eigenvalues: np.ndarray
    right_vectors: np.ndarray
    left_inverse: np.ndarray
    residual_norm: float

    def reconstruct(self):
        return (self.right_vectors * self.eigenvalues) @ self.left_inverse


def eig_real_nonsymmetric(a, rtol=1e-10):
    """Full complex eigendecomposition of a real square matrix.

    LAPACK's Hessenberg + shifted-QR driver does the iteration; the inverse
    of the eigenvector matrix comes from this module's LU.  A decomposition
    whose reconstruction error exceeds ``rtol * max|A|`` is rejected.

    Raises
    ------
    NoConvergence
        QR failed, or the eigenvector basis is too ill-conditioned to
        reproduce ``A`` (defective or nearly defective input).
    """
    a = _square(a)
    if np.iscomplexobj(a):
        if np.any(a.imag != 0):
            raise ValueError("eig_real_nonsymmetric expects a real matrix")
        a = a.real
    a = np.asarray(a, dtype=float)
    try:
        w, v = np.linalg.eig(a)
    except np.linalg.LinAlgError as exc:
        raise NoConvergence(f"QR iteration failed: {exc}") from exc
    try:
        vinv = inverse(v)
    except SingularMatrix as exc:
        raise NoConvergence("eigenvector matrix is singular (defective input)") from exc
    residual = float(np.abs(a - (v * w) @ vinv).max()) if a.size else 0.0
    scale = float(np.abs(a).max()) if a.size else 0.0
    if not np.isfinite(residual) or residual > rtol * max(scale, np.finfo(float).tiny):
        raise NoConvergence(
            f"reconstruction residual {residual:.3e} exceeds {rtol:g} * max|A| = {rtol * scale:.3e}"
        )
    return EigenDecomposition(
        eigenvalues=np.asarray(w, dtype=complex),
        right_vectors=np.asarray(v, dtype=complex),
        left_inverse=vinv,
        residual_norm=residual,
    )
