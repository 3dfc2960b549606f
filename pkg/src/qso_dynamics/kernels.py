"""Numba kernels for the hot iteration loops.

Every trajectory in the package advances through ``_step``: the generic
tensor contraction y_k = sum_i x_i (sum_j P[i,j,k] x_j) with ascending index
order, followed by clamp-negatives-then-divide renormalization.  Keeping one
evaluation path (and one floating-point operation order) makes runs bitwise
reproducible and keeps all operator families on identical numerics.
"""

import numba
import numpy as np


@numba.njit(cache=True, inline="always")
def _raw(P, x, y):
    m = x.shape[0]
    for k in range(m):
        acc = 0.0
        for i in range(m):
            inner = 0.0
            for j in range(m):
                inner += P[i, j, k] * x[j]
            acc += x[i] * inner
        y[k] = acc


@numba.njit(cache=True, inline="always")
def _step(P, x, y):
    _raw(P, x, y)
    m = x.shape[0]
    s = 0.0
    for k in range(m):
        if y[k] < 0.0:
            y[k] = 0.0
        s += y[k]
    for k in range(m):
        x[k] = y[k] / s


@numba.njit(cache=True)
def raw_image(P, x0):
    """One application of the quadratic map, before renormalization."""
    y = np.empty_like(x0)
    _raw(P, x0, y)
    return y


@numba.njit(cache=True)
def iterate_full(P, x0, n):
    """All n+1 trajectory points from x0 (row 0 is x0 itself)."""
    m = x0.shape[0]
    out = np.empty((n + 1, m))
    x = x0.copy()
    y = np.empty(m)
    out[0] = x
    for t in range(n):
        _step(P, x, y)
        out[t + 1] = x
    return out


@numba.njit(cache=True)
def iterate_tail(P, x0, burn, keep):
    """Tail samples after a burn-in, plus the smallest coordinate seen
    among the samples.  Returns (samples, min_coordinate)."""
    m = x0.shape[0]
    out = np.empty((keep, m))
    x = x0.copy()
    y = np.empty(m)
    min_coord = 1.0
    for t in range(burn + keep):
        _step(P, x, y)
        if t >= burn:
            r = t - burn
            for k in range(m):
                out[r, k] = x[k]
                if x[k] < min_coord:
                    min_coord = x[k]
    return out, min_coord


@numba.njit(cache=True)
def batch_advance(P, X, n):
    """Advance every row of X (B, m) by n steps in place, shared tensor."""
    B, m = X.shape
    y = np.empty(m)
    for b in range(B):
        x = X[b]
        for t in range(n):
            _step(P, x, y)


@numba.njit(cache=True)
def batch_advance_per_row(PB, X, n):
    """Advance every row of X by n steps, row b using tensor PB[b]."""
    B, m = X.shape
    y = np.empty(m)
    for b in range(B):
        x = X[b]
        for t in range(n):
            _step(PB[b], x, y)


@numba.njit(cache=True)
def batch_window_per_row(PB, X, n, w):
    """Advance n steps per row (per-row tensors) and record the last w
    points of each row.  Returns (w, B, m); X is advanced in place."""
    B, m = X.shape
    out = np.empty((w, B, m))
    y = np.empty(m)
    for b in range(B):
        x = X[b]
        for t in range(n):
            _step(PB[b], x, y)
            if t >= n - w:
                out[t - (n - w), b] = x
    return out


@numba.njit(cache=True)
def batch_first_hit(P, X, n_max, target, tol):
    """First step index at which each row comes within tol (Euclidean) of
    target, or -1 if that never happens within n_max steps.  Rows stop
    advancing once they hit."""
    B, m = X.shape
    hits = np.full(B, -1, dtype=np.int64)
    y = np.empty(m)
    tol2 = tol * tol
    for b in range(B):
        x = X[b]
        for t in range(1, n_max + 1):
            _step(P, x, y)
            d2 = 0.0
            for k in range(m):
                d2 += (x[k] - target[k]) ** 2
            if d2 < tol2:
                hits[b] = t
                break
    return hits


@numba.njit(cache=True)
def batch_phi_product_stats(P, X, n):
    """Per-row diagnostics of phi(x) = |x1-x2||x1-x3||x2-x3| along n steps:
    the largest single-step increase of phi, and the largest deviation from
    the multiplicative identity phi(next) = phi(x) * prod_i (1+3*x_i)/2.

    The identity is exact (in real arithmetic) for the symmetric mutation
    operator at mixing 1/2; for other tensors the residual is just a
    diagnostic.  Returns (max_increase, max_residual) arrays of length B.
    """
    B, m = X.shape
    max_inc = np.full(B, -np.inf)
    max_res = np.zeros(B)
    y = np.empty(m)
    for b in range(B):
        x = X[b]
        phi = abs(x[0] - x[1]) * abs(x[0] - x[2]) * abs(x[1] - x[2])
        for t in range(n):
            mult = (
                0.5 * (1.0 + 3.0 * x[0])
                * 0.5 * (1.0 + 3.0 * x[1])
                * 0.5 * (1.0 + 3.0 * x[2])
            )
            _step(P, x, y)
            phi_next = abs(x[0] - x[1]) * abs(x[0] - x[2]) * abs(x[1] - x[2])
            inc = phi_next - phi
            if inc > max_inc[b]:
                max_inc[b] = inc
            res = abs(phi_next - phi * mult)
            if res > max_res[b]:
                max_res[b] = res
            phi = phi_next
    return max_inc, max_res


@numba.njit(cache=True)
def benettin(P, x0, n, renorm_every):
    """Tangent-vector log-growth accumulation restricted to the simplex
    tangent plane (coordinates summing to zero).

    The tangent starts along (1, -1, 0, ...)/sqrt(2), is pushed through the
    analytic Jacobian J[k,l] = 2 sum_i P[i,l,k] x_i, projected back onto the
    sum-zero plane every step (this removes the structural sum eigenvalue 2),
    and renormalized every ``renorm_every`` steps.  Returns (sum of log
    norms, overflow flag); the exponent estimate is sum/n.
    """
    m = x0.shape[0]
    x = x0.copy()
    y = np.empty(m)
    u = np.zeros(m)
    u[0] = 1.0 / np.sqrt(2.0)
    u[1] = -1.0 / np.sqrt(2.0)
    v = np.empty(m)
    acc = 0.0
    for t in range(n):
        for k in range(m):
            s = 0.0
            for l in range(m):
                jkl = 0.0
                for i in range(m):
                    jkl += P[i, l, k] * x[i]
                s += 2.0 * jkl * u[l]
            v[k] = s
        mean = 0.0
        for k in range(m):
            mean += v[k]
        mean /= m
        for k in range(m):
            u[k] = v[k] - mean
        if (t + 1) % renorm_every == 0 or t == n - 1:
            nrm = 0.0
            for k in range(m):
                nrm += u[k] * u[k]
            nrm = np.sqrt(nrm)
            if not np.isfinite(nrm) or nrm == 0.0:
                return acc, True
            acc += np.log(nrm)
            for k in range(m):
                u[k] /= nrm
        _step(P, x, y)
    return acc, False


@numba.njit(cache=True)
def pair_distance_band(P, x0, y0, burn, horizon):
    """Min and max Euclidean distance between two orbits over the horizon
    tail (steps burn..horizon-1)."""
    m = x0.shape[0]
    x = x0.copy()
    z = y0.copy()
    tmp = np.empty(m)
    dmin = np.inf
    dmax = 0.0
    for t in range(horizon):
        _step(P, x, tmp)
        _step(P, z, tmp)
        if t >= burn:
            d2 = 0.0
            for k in range(m):
                d2 += (x[k] - z[k]) ** 2
            d = np.sqrt(d2)
            if d < dmin:
                dmin = d
            if d > dmax:
                dmax = d
    return dmin, dmax
