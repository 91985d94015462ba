"""
Scaled conjugate gradient minimisation (Moller, 1993).

Curvature along the search direction comes from a forward difference of
the gradient, and a Levenberg-Marquardt style scale ``lambda`` is adapted
from the ratio of actual to predicted reduction, so no line search is
needed.
"""
from dataclasses import dataclass, field

import numpy as np

LAMBDA_MIN = 1e-15
LAMBDA_MAX = 1e15


@dataclass(frozen=True)
class ScgOptions:
    max_iters: int = 100
    grad_tol: float = 1e-6
    step_tol: float = 1e-8
    sigma0: float = 1e-4
    lambda0: float = 1e-6

    def __post_init__(self):
        if self.max_iters < 1 or min(self.grad_tol, self.step_tol,
                                     self.sigma0, self.lambda0) <= 0:
            raise ValueError("SCG options must be positive")


@dataclass
class ScgTrace:
    errors: list = field(default_factory=list)
    iterations: int = 0
    stop_reason: str = "max_iters"


def _evaluate(objective, w):
    f, g = objective(w)
    g = np.asarray(g, dtype=float)
    return float(f), g


def minimize(objective, w0, opts=None):
    """
    Minimise ``objective(w) -> (error, gradient)`` starting at `w0`.

    Returns the final point and an `ScgTrace`. ``trace.errors`` starts with
    the objective at `w0` and holds the current objective after every
    iteration; only steps that do not increase the objective are accepted.
    """
    opts = opts or ScgOptions()
    x = np.array(w0, dtype=float)
    fold, gnew = _evaluate(objective, x)
    if not np.isfinite(fold) or not np.all(np.isfinite(gnew)):
        raise ValueError("invalid start")

    trace = ScgTrace(errors=[fold])
    if np.linalg.norm(gnew) < opts.grad_tol:
        trace.stop_reason = "grad_tol"
        return x, trace

    n = x.size
    d = -gnew
    gold = gnew
    lam = opts.lambda0
    success = True
    n_success = 0
    mu = kappa = theta = 0.0

    for j in range(1, opts.max_iters + 1):
        if success:
            mu = d @ gnew
            if mu >= 0:
                d = -gnew
                mu = d @ gnew
            kappa = d @ d
            if kappa < np.finfo(float).eps ** 2:
                trace.stop_reason = "grad_tol"
                trace.iterations = j - 1
                return x, trace
            sigma = opts.sigma0 / np.sqrt(kappa)
            _, gplus = _evaluate(objective, x + sigma * d)
            theta = d @ (gplus - gnew) / sigma

        # scaled curvature, made positive definite if needed
        delta = theta + lam * kappa
        if delta <= 0:
            delta = lam * kappa
            lam = lam - theta / kappa
        alpha = -mu / delta

        xnew = x + alpha * d
        fnew, gcand = _evaluate(objective, xnew)
        if np.isfinite(fnew) and fnew <= fold:
            comparison = 2.0 * (fnew - fold) / (alpha * mu)
        else:
            comparison = -1.0

        trace.iterations = j
        if comparison >= 0:
            success = True
            n_success += 1
            step = np.max(np.abs(alpha * d))
            x = xnew
            trace.errors.append(fnew)
            gold, gnew = gnew, gcand
            if np.linalg.norm(gnew) < opts.grad_tol:
                trace.stop_reason = "grad_tol"
                return x, trace
            if step < opts.step_tol and abs(fnew - fold) < opts.step_tol:
                trace.stop_reason = "step_tol"
                return x, trace
            fold = fnew
        else:
            success = False
            trace.errors.append(fold)

        if comparison < 0.25:
            lam = min(4.0 * lam, LAMBDA_MAX)
        elif comparison > 0.75:
            lam = max(0.5 * lam, LAMBDA_MIN)

        if n_success == n:
            d = -gnew
            n_success = 0
        elif success:
            beta = (gold - gnew) @ gnew / mu
            d = beta * d - gnew

    trace.stop_reason = "max_iters"
    return x, trace
