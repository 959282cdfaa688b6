"""Adaptive quadrature with nested Clenshaw-Curtis panels.

Each panel is integrated with a (2n+1)-point Clenshaw-Curtis rule and the
embedded (n+1)-point rule; their difference is the panel error.  Panels that
exceed their share of the tolerance are bisected, all of them per sweep, so
one integrand call evaluates every new node at once.

Integrands are vectorized: ``f(x)`` receives a 1-D node array and returns an
array whose leading axis runs over the nodes.  Any trailing shape is allowed,
which is how whole frequency grids are integrated together.
"""

from functools import lru_cache

import numpy as np

from ..errors import ToleranceNotMet

_EPS = np.finfo(float).eps


@lru_cache(maxsize=None)
def clenshaw_curtis(n):
    """Nodes and weights of the (n+1)-point Clenshaw-Curtis rule on [-1, 1]."""
    if n < 2 or n % 2:
        raise ValueError("n must be even and >= 2")
    k = np.arange(n + 1)
    theta = k * np.pi / n
    x = np.cos(theta)
    w = np.zeros(n + 1)
    for i in range(n + 1):
        s = 0.0
        for j in range(1, n // 2 + 1):
            b = 1.0 if 2 * j == n else 2.0
            s += b / (4.0 * j * j - 1.0) * np.cos(2.0 * j * theta[i])
        c = 1.0 if i in (0, n) else 2.0
        w[i] = c / n * (1.0 - s)
    return x, w


@lru_cache(maxsize=None)
def _nested_rule(n):
    x, w_hi = clenshaw_curtis(2 * n)
    _, w_half = clenshaw_curtis(n)
    w_lo = np.zeros_like(w_hi)
    w_lo[::2] = w_half
    return x, w_hi, w_lo


def _group_norm(values, reduce_axes):
    mag = np.abs(values)
    if reduce_axes is None:
        return mag
    return np.max(mag, axis=reduce_axes, keepdims=True)


def integrate_adaptive(f, a, b, tol=1e-10, rtol=0.0, *, order=32, reduce_axes=None,
                       max_panels=200_000, max_nodes_per_call=8192, initial_panels=1,
                       full_output=False):
    """Integrate ``f`` over ``[a, b]`` to an estimated absolute error ``tol``.

    Parameters
    ----------
    f : callable
        Vectorized integrand, ``f(x) -> array`` with leading axis ``len(x)``.
    tol, rtol : float
        Elementwise target ``tol + rtol * |I|``.  With ``reduce_axes`` the
        relative part uses the max of ``|I|`` over those value axes (counted
        without the node axis), so each group is held to its own scale.
    order : int
        The high rule uses ``order + 1`` nodes; the embedded rule half that.
    full_output : bool
        Also return the elementwise error estimate and the panel count.

    Raises
    ------
    ToleranceNotMet
        When ``max_panels`` is reached; carries the estimate and error bound.
    """
    if not tol > 0 and not rtol > 0:
        raise ValueError("need tol > 0 or rtol > 0")
    a = float(a)
    b = float(b)
    if a == b:
        val = np.zeros_like(np.asarray(f(np.array([a])))[0]) * 0
        return (val, np.zeros_like(np.abs(val)), 0) if full_output else val
    x_ref, w_hi, w_lo = _nested_rule(order)
    if reduce_axes is not None:
        reduce_axes = tuple(ax + 0 for ax in np.atleast_1d(reduce_axes))
    length = b - a

    rules = np.stack([w_hi, w_lo])

    def evaluate(lefts, rights):
        # returns (Q_hi, Q_lo, sum |w||f|) per panel
        lefts = np.asarray(lefts)
        rights = np.asarray(rights)
        half = 0.5 * (rights - lefts)
        mid = 0.5 * (rights + lefts)
        nodes = (mid[:, None] + half[:, None] * x_ref[None, :]).ravel()
        step = max(1, max_nodes_per_call // x_ref.size) * x_ref.size
        q = []
        mag = []
        tail = None
        for start in range(0, nodes.size, step):
            vals = np.asarray(f(nodes[start:start + step]))
            tail = vals.shape[1:]
            vals = vals.reshape(-1, x_ref.size, int(np.prod(tail, dtype=int)))
            # stacked gemv, no transposed copies
            q.append(np.matmul(rules, vals))
            mag.append(np.matmul(w_hi, np.abs(vals)))
        q = np.concatenate(q, axis=0)
        mag = np.concatenate(mag, axis=0)
        shape = (lefts.size,) + tail
        h = half.reshape((-1,) + (1,) * len(tail))
        return (h * q[:, 0].reshape(shape), h * q[:, 1].reshape(shape),
                np.abs(h) * mag.reshape(shape))

    edges = np.linspace(a, b, int(initial_panels) + 1)
    lefts, rights = edges[:-1], edges[1:]
    q_hi, q_lo, mag = evaluate(lefts, rights)
    done_val = None
    done_err = None
    n_panels = lefts.size
    while True:
        err = np.maximum(np.abs(q_hi - q_lo), 50.0 * _EPS * mag)
        total = q_hi.sum(axis=0) + (done_val if done_val is not None else 0)
        total_err = err.sum(axis=0) + (done_err if done_err is not None else 0)
        target = tol + rtol * _group_norm(total, reduce_axes)
        if np.all(total_err <= target):
            break
        share = target * (np.abs(rights - lefts) / abs(length)).reshape((-1,) + (1,) * (err.ndim - 1))
        bad = err > share
        bad = bad.reshape(bad.shape[0], -1).any(axis=1)
        roundoff = (np.abs(q_hi - q_lo) <= 50.0 * _EPS * mag).reshape(bad.shape[0], -1).all(axis=1)
        bad &= ~roundoff
        if not np.any(bad):
            # every panel meets its share yet the sum does not: refine the worst
            worst = err.reshape(err.shape[0], -1).max(axis=1)
            bad = worst >= np.quantile(worst, 0.5)
            bad &= ~roundoff
            if not np.any(bad):
                break
        if n_panels + int(bad.sum()) > max_panels:
            est = total
            raise ToleranceNotMet(
                f"subdivision cap of {max_panels} panels reached "
                f"(max error {np.max(total_err):.3e})",
                estimate=est, error=total_err,
            )
        keep = ~bad
        kept_val = q_hi[keep].sum(axis=0)
        kept_err = err[keep].sum(axis=0)
        done_val = kept_val if done_val is None else done_val + kept_val
        done_err = kept_err if done_err is None else done_err + kept_err
        mids = 0.5 * (lefts[bad] + rights[bad])
        lefts = np.concatenate([lefts[bad], mids])
        rights = np.concatenate([mids, rights[bad]])
        n_panels += int(bad.sum())
        q_hi, q_lo, mag = evaluate(lefts, rights)
    if full_output:
        return total, total_err, n_panels
    return total
