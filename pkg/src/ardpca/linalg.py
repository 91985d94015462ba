"""
Dense symmetric linear algebra: sample covariance, Jacobi eigensolver and
damped SPD solves.
"""
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

SYM_RTOL = 1e-12
EIG_TOL = 1e-12
EIG_MAX_SWEEPS = 100


class EigenDecomposition(NamedTuple):
    values: np.ndarray
    vectors: np.ndarray


def covariance(data):
    """Sample covariance of the columns of `data` with an N-1 denominator."""
    x = np.asarray(data, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise ValueError("insufficient samples")
    if not np.all(np.isfinite(x)):
        raise ValueError("invalid data")
    xc = x - x.mean(axis=0)
    cov = xc.T @ xc / (x.shape[0] - 1)
    return 0.5 * (cov + cov.T)


def check_symmetric(m, rtol=SYM_RTOL):
    a = np.asarray(m, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("not symmetric")
    if not np.all(np.isfinite(a)):
        raise ValueError("invalid data")
    scale = np.max(np.abs(a)) if a.size else 0.0
    if np.max(np.abs(a - a.T), initial=0.0) > rtol * scale:
        raise ValueError("not symmetric")
    return a


@lru_cache(maxsize=None)
def _round_robin(n):
    # Each round is a set of disjoint (p, q) pairs; over n-1 rounds every
    # pair with p < q appears exactly once.
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = sorted((min(p), max(p)) for p in pairs if max(p) < n)
        if pairs:
            p, q = zip(*pairs)
            rounds.append((np.array(p), np.array(q)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(rounds)


def _sign_convention(vectors):
    v = vectors.copy()
    for c in range(v.shape[1]):
        col = np.abs(v[:, c])
        idx = int(np.argmax(col >= col.max() - 1e-12))
        if v[idx, c] < 0:
            v[:, c] = -v[:, c]
    return v


def sym_eig(m, tol=EIG_TOL, max_sweeps=EIG_MAX_SWEEPS):
    """
    Full eigendecomposition of a real symmetric matrix by cyclic Jacobi
    rotations.

    Each sweep visits every off-diagonal pair once, grouped into rounds of
    disjoint pairs so that a whole round is applied as one vectorised
    update. Iteration stops when the off-diagonal Frobenius norm falls below
    ``tol * ||m||_F``.

    Returns
    -------
    EigenDecomposition
        ``values`` sorted descending and ``vectors`` with matching columns.
        Each eigenvector is signed so its largest-magnitude component is
        positive (lowest index wins ties).
    """
    a = check_symmetric(m).copy()
    n = a.shape[0]
    v = np.eye(n)
    norm = np.linalg.norm(a)
    rounds = _round_robin(n) if n > 1 else ()

    offdiag = ~np.eye(n, dtype=bool)

    def off_norm():
        return np.linalg.norm(a[offdiag])

    sweeps = 0
    while off_norm() > tol * norm:
        if sweeps >= max_sweeps:
            raise RuntimeError("eig divergence")
        for p, q in rounds:
            apq = a[p, q]
            active = apq != 0.0
            if not np.any(active):
                continue
            theta = np.zeros_like(apq)
            theta[active] = (a[q, q][active] - a[p, p][active]) / (2.0 * apq[active])
            t = np.where(active,
                         np.sign(theta) / (np.abs(theta) + np.hypot(theta, 1.0)),
                         0.0)
            t[active & (theta == 0.0)] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c

            ap, aq = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * ap - s * aq
            a[:, q] = s * ap + c * aq
            ap, aq = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * ap - s[:, None] * aq
            a[q, :] = s[:, None] * ap + c[:, None] * aq
            a[p, q] = 0.0
            a[q, p] = 0.0

            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - s * vq
            v[:, q] = s * vp + c * vq
        sweeps += 1

    values = np.diag(a).copy()
    order = np.argsort(-values, kind="stable")
    return EigenDecomposition(values[order], _sign_convention(v[:, order]))


def solve_spd(m, rhs):
    """
    Solve ``m @ x = rhs`` for symmetric positive definite `m` by Cholesky.

    If the factorisation fails, the diagonal is damped once by
    ``1e-10 * trace / dim`` and the factorisation retried. `rhs` may be a
    vector or a matrix of right-hand sides.
    """
    a = check_symmetric(m)
    b = np.asarray(rhs, dtype=float)
    if b.shape[0] != a.shape[0]:
        raise ValueError("dimension mismatch")
    try:
        factor = cho_factor(a, lower=True, check_finite=False)
    except LinAlgError:
        n = a.shape[0]
        damping = 1e-10 * abs(np.trace(a)) / n
        try:
            factor = cho_factor(a + damping * np.eye(n), lower=True, check_finite=False)
        except LinAlgError:
            raise ValueError("not positive definite") from None
    return cho_solve(factor, b, check_finite=False)


def inverse_diagonal(m):
    """Diagonal of ``m^-1`` for SPD `m`, via `solve_spd`."""
    a = np.asarray(m, dtype=float)
    return np.diag(solve_spd(a, np.eye(a.shape[0]))).copy()
