"""Independent reference computations shared by the test modules."""
import numpy as np


def cubic_char_poly(m):
    """Coefficients (c2, c1, c0) of det(m - x I) = -x^3 + c2 x^2 - c1 x + c0."""
    a = np.asarray(m, dtype=float)
    c2 = a[0, 0] + a[1, 1] + a[2, 2]
    c1 = (a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
          + a[0, 0] * a[2, 2] - a[0, 2] * a[2, 0]
          + a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
    c0 = (a[0, 0] * (a[1, 1] * a[2, 2] - a[1, 2] * a[2, 1])
          - a[0, 1] * (a[1, 0] * a[2, 2] - a[1, 2] * a[2, 0])
          + a[0, 2] * (a[1, 0] * a[2, 1] - a[1, 1] * a[2, 0]))
    return c2, c1, c0


def _bisect(f, lo, hi, iters=200):
    flo = f(lo)
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        fm = f(mid)
        if (fm > 0) == (flo > 0) and fm != 0:
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def cubic_eigenvalues(m):
    """
    Eigenvalues of a symmetric 3x3 matrix as roots of its characteristic
    cubic, bracketed by the cubic's turning points and refined by bisection.
    Returned in descending order.
    """
    c2, c1, c0 = cubic_char_poly(m)

    def p(x):
        return ((-x + c2) * x - c1) * x + c0

    bound = 1.0 + max(abs(c2), abs(c1), abs(c0)) * 3
    disc = max(4 * c2 * c2 - 12 * c1, 0.0)
    r1 = (2 * c2 - np.sqrt(disc)) / 6
    r2 = (2 * c2 + np.sqrt(disc)) / 6
    roots = []
    for lo, hi in ((-bound, r1), (r1, r2), (r2, bound)):
        if np.sign(p(lo)) == np.sign(p(hi)) and p(lo) != 0 and p(hi) != 0:
            # double root sits on a turning point
            roots.append(lo if abs(p(lo)) < abs(p(hi)) else hi)
        else:
            roots.append(_bisect(p, lo, hi))
    return np.sort(roots)[::-1]


def brute_covariance(x):
    x = np.asarray(x, dtype=float)
    n, d = x.shape
    out = np.zeros((d, d))
    for i in range(d):
        mi = sum(x[r, i] for r in range(n)) / n
        for j in range(d):
            mj = sum(x[r, j] for r in range(n)) / n
            out[i, j] = sum((x[r, i] - mi) * (x[r, j] - mj) for r in range(n)) / (n - 1)
    return out


def brute_sof(healthy, damaged):
    """Per-column separation score written out with plain Python loops."""
    healthy = np.asarray(healthy, dtype=float)
    damaged = np.asarray(damaged, dtype=float)
    scores = []
    for j in range(healthy.shape[1]):
        cols = []
        for pop in (healthy, damaged):
            v = [float(r) for r in pop[:, j]]
            m = sum(v) / len(v)
            s = (sum((t - m) ** 2 for t in v) / (len(v) - 1)) ** 0.5
            cols.append((m, s))
        (m1, s1), (m2, s2) = cols
        scores.append(abs(m1 - m2) / ((s1 + s2) / 2))
    return scores


def direct_dft(x):
    x = np.asarray(x, dtype=float)
    n = x.size
    t = np.arange(n)
    return np.array([np.sum(x * np.exp(-2j * np.pi * k * t / n)) for k in range(n)])


def central_difference(f, w, h=1e-5):
    w = np.array(w, dtype=float)
    g = np.zeros_like(w)
    for i in range(w.size):
        e = np.zeros_like(w)
        e[i] = h
        g[i] = (f(w + e) - f(w - e)) / (2 * h)
    return g


def random_spd(rng, n, cond=None):
    a = rng.standard_normal((n, n))
    return a.T @ a + n * 0.1 * np.eye(n)
