"""
Automatic relevance determination for the grouped-prior MLP.

Training alternates scaled conjugate gradient minimisation of the
regularised error with evidence-framework re-estimation of one prior
precision per weight group. Inputs whose weight group ends with a small
precision (large prior variance) are the relevant ones.
"""
from dataclasses import dataclass, replace

import numpy as np

from . import mlp
from .linalg import inverse_diagonal
from .scg import ScgOptions, minimize

ALPHA_MIN = 1e-6
ALPHA_MAX = 1e6
EW_FLOOR = 1e-12
RANK_VARIANCE = "variance"
RANK_MAGNITUDE = "magnitude"


@dataclass(frozen=True)
class ArdOptions:
    cycles: int = 2
    iters_per_cycle: int = 100
    alpha_init: float = 0.1
    warm_start: bool = True
    rank_by: str = RANK_VARIANCE
    beta: float = 1.0

    def __post_init__(self):
        if self.cycles < 1 or self.iters_per_cycle < 1:
            raise ValueError("cycles and iters_per_cycle must be positive")
        if self.alpha_init <= 0 or self.beta <= 0:
            raise ValueError("invalid hyperparameter")
        if self.rank_by not in (RANK_VARIANCE, RANK_MAGNITUDE):
            raise ValueError(f"unknown ranking {self.rank_by!r}")


@dataclass(frozen=True)
class ArdState:
    alphas: np.ndarray
    gammas: np.ndarray
    group_sizes: np.ndarray
    n_inputs: int
    relevance: np.ndarray = None

    @property
    def input_alphas(self):
        return self.alphas[:self.n_inputs]


def evidence_update(weights, data_hessian, alphas, group_index, beta=1.0):
    """
    One evidence-framework update of per-group prior precisions.

    With ``A = beta * H + diag(alpha per parameter)``, each group gets
    ``gamma_c = N_c - alpha_c * sum_{i in c} (A^-1)_ii`` well-determined
    parameters and the new precision ``alpha_c = gamma_c / (2 E_W,c)`` with
    ``E_W,c = sum_{i in c} w_i^2 / 2``.

    Returns (new_alphas, gammas); gammas are clipped to [0, N_c] and alphas
    to [ALPHA_MIN, ALPHA_MAX]. A group whose weights have vanished is given
    the maximal precision.
    """
    w = np.asarray(weights, dtype=float)
    alphas = np.asarray(alphas, dtype=float)
    group_index = np.asarray(group_index)
    n_groups = alphas.size
    per_param = alphas[group_index]
    a = beta * np.asarray(data_hessian, dtype=float) + np.diag(per_param)
    a = 0.5 * (a + a.T)
    inv_diag = inverse_diagonal(a)

    sizes = np.bincount(group_index, minlength=n_groups).astype(float)
    trace = np.bincount(group_index, weights=inv_diag, minlength=n_groups)
    ew = 0.5 * np.bincount(group_index, weights=w * w, minlength=n_groups)
    gammas = np.clip(sizes - alphas * trace, 0.0, sizes)
    with np.errstate(divide="ignore", invalid="ignore"):
        new = np.where(ew < EW_FLOOR, ALPHA_MAX, gammas / np.maximum(2.0 * ew, EW_FLOOR))
    return np.clip(new, ALPHA_MIN, ALPHA_MAX), gammas


def reestimate_alphas(net, inputs, targets, alphas, beta=1.0):
    """Evidence update at the current weights using the Gauss-Newton Hessian."""
    hessian = mlp.gauss_newton_hessian(net, inputs)
    return evidence_update(net.params, hessian, alphas,
                           net.layout.group_index(), beta=beta)


def rank_inputs(state, net=None, rank_by=RANK_VARIANCE):
    """
    Input indices, most relevant first.

    By default inputs are ordered by ascending precision (largest posterior
    variance first). ``rank_by="magnitude"`` orders by descending sum of
    squared first-layer weights instead, which needs `net`. Ties go to the
    lower index.
    """
    if rank_by == RANK_MAGNITUDE:
        if net is None:
            raise ValueError("magnitude ranking needs the trained network")
        key = -np.sum(net.w1 ** 2, axis=1)
    else:
        key = np.asarray(state.alphas[:state.n_inputs], dtype=float)
    return np.argsort(key, kind="stable")


def select_inputs(data, ordering, k):
    """Columns ``ordering[:k]`` of `data`, most relevant first."""
    data = np.asarray(data)
    ordering = np.asarray(ordering)
    if not 1 <= k <= data.shape[1] or k > ordering.size:
        raise ValueError("invalid k: must satisfy 1 <= k <= number of inputs")
    return data[:, ordering[:k]]


def train_network(net, inputs, targets, alphas, scg_opts):
    """SCG minimisation of the regularised error from the weights of `net`."""
    layout = net.layout
    x = np.asarray(inputs, dtype=float)

    def objective(w):
        return mlp.regularized_error_grad(mlp.unpack(layout, w), x, targets, alphas)

    w, trace = minimize(objective, net.params, scg_opts)
    return mlp.unpack(layout, w), trace


def ard_train(inputs, targets, layout, opts=None, seed=0, scg_opts=None):
    """
    Train an ARD network for ``opts.cycles`` cycles.

    Each cycle runs ``opts.iters_per_cycle`` SCG iterations with the current
    precisions and then re-estimates them. Later cycles continue from the
    previous weights unless ``opts.warm_start`` is false.

    Returns
    -------
    net : Network
    state : ArdState
        Final precisions, effective parameter counts and relevance order.
    """
    opts = opts or ArdOptions()
    x = np.asarray(inputs, dtype=float)
    if x.ndim != 2 or x.shape[1] != layout.n_in:
        raise ValueError(f"inputs have {x.shape[-1]} columns, layout expects {layout.n_in}")
    scg_opts = scg_opts or ScgOptions(max_iters=opts.iters_per_cycle)
    scg_opts = replace(scg_opts, max_iters=opts.iters_per_cycle)

    initial = mlp.init_network(layout, seed)
    net = initial
    alphas = np.full(layout.n_groups, opts.alpha_init)
    gammas = np.zeros(layout.n_groups)
    for _ in range(opts.cycles):
        start = net if opts.warm_start else initial
        net, _ = train_network(start, x, targets, alphas, scg_opts)
        alphas, gammas = reestimate_alphas(net, x, targets, alphas, beta=opts.beta)

    state = ArdState(alphas, gammas, layout.group_sizes(), layout.n_in)
    state = replace(state, relevance=rank_inputs(state, net, opts.rank_by))
    return net, state


def save_ard_csv(state, path):
    """One row per group: id, size, precision, effective parameters."""
    with open(path, "w") as fh:
        fh.write("group,size,alpha,gamma\n")
        for g, (size, a, gam) in enumerate(zip(state.group_sizes, state.alphas, state.gammas)):
            fh.write(f"{g},{int(size)},{a:.17g},{gam:.17g}\n")


def load_ard_csv(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh if ln.strip()]
    if not lines or lines[0] != "group,size,alpha,gamma":
        raise ValueError("line 1: bad ARD header")
    rows = []
    for i, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != 4:
            raise ValueError(f"line {i}: expected 4 fields")
        rows.append((int(parts[1]), float(parts[2]), float(parts[3])))
    sizes, alphas, gammas = (np.array(c) for c in zip(*rows))
    state = ArdState(alphas, gammas, sizes.astype(int), len(rows) - 3)
    return replace(state, relevance=rank_inputs(state))
