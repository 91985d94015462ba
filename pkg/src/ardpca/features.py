"""
Condition-monitoring features of a single vibration record: six summary
statistics followed by AR, MA and ARMA model coefficients.

Coefficient sign conventions::

    AR:    x_t = a_1 x_{t-1} + ... + a_p x_{t-p} + e_t
    MA:    x_t = e_t + b_1 e_{t-1} + ... + b_q e_{t-q}
    ARMA:  x_t = sum a_i x_{t-i} + e_t + sum b_j e_{t-j}
"""
import numpy as np

from .linalg import solve_spd

AR_ORDER = 20
MA_ORDER = 20
ARMA_ORDERS = (8, 8)
N_FEATURES = 6 + AR_ORDER + MA_ORDER + sum(ARMA_ORDERS)
MIN_LENGTH = 128
# ARMA regressions on over-parameterised models are near-collinear along
# the a = -b ridge; shrink toward the minimum-norm solution.
ARMA_RIDGE = 1e-2

STAT_NAMES = ("mean", "rms", "crest", "variance", "skewness", "kurtosis")


def feature_names(ar=AR_ORDER, ma=MA_ORDER, arma=ARMA_ORDERS):
    return (list(STAT_NAMES)
            + [f"ar{i}" for i in range(1, ar + 1)]
            + [f"ma{i}" for i in range(1, ma + 1)]
            + [f"arma_a{i}" for i in range(1, arma[0] + 1)]
            + [f"arma_b{i}" for i in range(1, arma[1] + 1)])


def _as_signal(signal):
    x = np.asarray(signal, dtype=float)
    if x.ndim != 1:
        raise ValueError("signal must be one-dimensional")
    if not np.all(np.isfinite(x)):
        raise ValueError("signal contains non-finite values")
    return x


def basic_stats(signal):
    """
    Mean, rms, crest factor, variance (n-1), skewness and raw kurtosis.

    A constant signal reports skewness and kurtosis as 0.
    """
    x = _as_signal(signal)
    n = x.size
    if n < 4:
        raise ValueError("signal too short")
    mean = x.mean()
    rms = np.sqrt(np.mean(x * x))
    crest = np.max(np.abs(x)) / rms if rms > 0 else 0.0
    dev = x - mean
    m2 = np.mean(dev ** 2)
    if m2 > 0:
        skew = np.mean(dev ** 3) / m2 ** 1.5
        kurt = np.mean(dev ** 4) / m2 ** 2
    else:
        skew = kurt = 0.0
    return np.array([mean, rms, crest, dev @ dev / (n - 1), skew, kurt])


def burg(signal, p, demean=True):
    """
    AR(p) coefficients by Burg's method.

    Reflection coefficients never exceed one in magnitude, so the fitted
    model is stable.

    Returns
    -------
    coeffs : ndarray, shape (p,)
    sigma2 : float
        Final prediction-error power.
    """
    x = _as_signal(signal)
    if p < 1:
        raise ValueError("order must be positive")
    if x.size <= 2 * p:
        raise ValueError("signal too short for AR order")
    if demean:
        x = x - x.mean()
    f = x[1:].copy()
    b = x[:-1].copy()
    a = np.zeros(0)
    sigma2 = np.mean(x * x)
    for _ in range(p):
        den = f @ f + b @ b
        k = 2.0 * (f @ b) / den if den > 0 else 0.0
        # coefficients here follow x_t = sum a_i x_{t-i}
        a = np.concatenate([a - k * a[::-1], [k]])
        sigma2 *= 1.0 - k * k
        f, b = (f - k * b)[1:], (b - k * f)[:-1]
    return a, sigma2


def ar_coeffs(signal, p=AR_ORDER):
    return burg(signal, p)[0]


def ar_roots(coeffs):
    """Roots of z^p - a_1 z^{p-1} - ... - a_p."""
    return np.roots(np.concatenate([[1.0], -np.asarray(coeffs, dtype=float)]))


def ar_residuals(x, coeffs):
    """One-step prediction errors e_t for t >= p."""
    p = len(coeffs)
    lagged = np.column_stack([x[p - i:x.size - i] for i in range(1, p + 1)])
    return x[p:] - lagged @ coeffs


def ma_coeffs(signal, q=MA_ORDER):
    """
    MA(q) coefficients by Durbin's method.

    A long AR model of order 4q approximates the inverse of the MA filter;
    its impulse response ``c = (1, -a_1, ..., -a_L)`` then satisfies
    ``c_t + sum_j b_j c_{t-j} ~ 0`` and `b` is the least-squares solution.
    """
    x = _as_signal(signal)
    if q < 1:
        raise ValueError("order must be positive")
    if x.size <= 4 * q:
        raise ValueError("signal too short for MA order")
    long_order = 4 * q
    a, _ = burg(x, long_order)
    c = np.concatenate([[1.0], -a])
    padded = np.concatenate([np.zeros(q), c])
    design = np.column_stack([padded[q - j + 1:q - j + 1 + long_order]
                              for j in range(1, q + 1)])
    target = -c[1:]
    return _least_squares(design, target)


def _least_squares(design, target, ridge=0.0):
    gram = design.T @ design
    if not np.any(gram):
        return np.zeros(design.shape[1])
    if ridge:
        gram = gram + ridge * np.trace(gram) / gram.shape[0] * np.eye(gram.shape[0])
    return solve_spd(gram, design.T @ target)


def arma_coeffs(signal, p=ARMA_ORDERS[0], q=ARMA_ORDERS[1]):
    """
    ARMA(p, q) coefficients by the Hannan-Rissanen two-stage method.

    Residuals of a long AR(4(p+q)) fit stand in for the innovations; the
    signal is then regressed on its own p lags and q lagged residuals, with
    a ridge of ``ARMA_RIDGE * trace / dim`` on the normal equations.
    Returns the p AR coefficients followed by the q MA coefficients.
    """
    x = _as_signal(signal)
    if p < 0 or q < 0 or p + q < 1:
        raise ValueError("orders must be nonnegative and not both zero")
    long_order = 4 * (p + q)
    if x.size <= long_order + max(p, q) + 1 or x.size <= 4 * (p + q):
        raise ValueError("signal too short for ARMA orders")
    x = x - x.mean()
    a, _ = burg(x, long_order, demean=False)
    e = np.concatenate([np.zeros(long_order), ar_residuals(x, a)])
    start = long_order + max(p, q)
    cols = [x[start - i:x.size - i] for i in range(1, p + 1)]
    cols += [e[start - j:x.size - j] for j in range(1, q + 1)]
    design = np.column_stack(cols)
    return _least_squares(design, x[start:], ridge=ARMA_RIDGE)


def feature_vector(signal, ar=AR_ORDER, ma=MA_ORDER, arma=ARMA_ORDERS):
    """The 6 statistics, then AR, MA and ARMA coefficients (62 by default)."""
    x = _as_signal(signal)
    if x.size < MIN_LENGTH:
        raise ValueError(f"signal too short: need at least {MIN_LENGTH} points")
    return np.concatenate([
        basic_stats(x),
        ar_coeffs(x, ar),
        ma_coeffs(x, ma),
        arma_coeffs(x, *arma),
    ])


def feature_matrix(signals, **orders):
    return np.array([feature_vector(s, **orders) for s in np.asarray(signals)])
