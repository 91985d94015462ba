"""
Two-layer perceptron with tanh hidden units and grouped parameters.

Parameters are flattened in a fixed order: first-layer weights (row-major,
one row per input), hidden biases, second-layer weights (row-major) and
output biases. Every parameter belongs to one prior group: group ``i`` for
the ``n_hidden`` weights leaving input ``i``, then one group each for the
hidden biases, the second-layer weights and the output biases.
"""
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

LOGISTIC = "logistic"
LINEAR = "linear"


@dataclass(frozen=True)
class Layout:
    n_in: int
    n_hidden: int
    n_out: int
    output_kind: str = LINEAR

    def __post_init__(self):
        if min(self.n_in, self.n_hidden, self.n_out) < 1:
            raise ValueError("invalid layout")
        if self.output_kind not in (LOGISTIC, LINEAR):
            raise ValueError(f"unknown output kind {self.output_kind!r}")

    @property
    def n_params(self):
        return (self.n_in + 1) * self.n_hidden + (self.n_hidden + 1) * self.n_out

    @property
    def n_groups(self):
        return self.n_in + 3

    def group_index(self):
        """Group id of every flat parameter."""
        n_in, nh, no = self.n_in, self.n_hidden, self.n_out
        return np.concatenate([
            np.repeat(np.arange(n_in), nh),
            np.full(nh, n_in),
            np.full(nh * no, n_in + 1),
            np.full(no, n_in + 2),
        ])

    def group_sizes(self):
        return np.bincount(self.group_index(), minlength=self.n_groups)

    def group_names(self):
        return [f"input{i}" for i in range(self.n_in)] + [
            "hidden_bias", "second_layer", "output_bias"]


@dataclass(frozen=True)
class Network:
    layout: Layout
    w1: np.ndarray
    b1: np.ndarray
    w2: np.ndarray
    b2: np.ndarray

    @property
    def params(self):
        return np.concatenate([self.w1.ravel(), self.b1, self.w2.ravel(), self.b2])

    def with_params(self, w):
        return unpack(self.layout, w)


class ErrorGrad(NamedTuple):
    error: float
    grad: np.ndarray


def unpack(layout, w):
    w = np.asarray(w, dtype=float)
    if w.shape != (layout.n_params,):
        raise ValueError("parameter vector length does not match layout")
    n_in, nh, no = layout.n_in, layout.n_hidden, layout.n_out
    i = 0
    w1 = w[i:i + n_in * nh].reshape(n_in, nh)
    i += n_in * nh
    b1 = w[i:i + nh]
    i += nh
    w2 = w[i:i + nh * no].reshape(nh, no)
    i += nh * no
    b2 = w[i:i + no]
    return Network(layout, w1.copy(), b1.copy(), w2.copy(), b2.copy())


def init_network(layout, seed):
    """Gaussian weights with per-layer standard deviation 1/sqrt(fan_in)."""
    rng = np.random.default_rng(seed)
    s1 = 1.0 / np.sqrt(layout.n_in)
    s2 = 1.0 / np.sqrt(layout.n_hidden)
    w1 = rng.normal(0.0, s1, (layout.n_in, layout.n_hidden))
    b1 = rng.normal(0.0, s1, layout.n_hidden)
    w2 = rng.normal(0.0, s2, (layout.n_hidden, layout.n_out))
    b2 = rng.normal(0.0, s2, layout.n_out)
    return Network(layout, w1, b1, w2, b2)


def _sigmoid(a):
    return 0.5 * (1.0 + np.tanh(0.5 * a))


def _as_inputs(net, x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != net.layout.n_in:
        raise ValueError(f"expected {net.layout.n_in} inputs, got shape {x.shape}")
    return x


def _propagate(net, x):
    z = np.tanh(x @ net.w1 + net.b1)
    a = z @ net.w2 + net.b2
    y = _sigmoid(a) if net.layout.output_kind == LOGISTIC else a
    return z, y


def forward(net, x):
    """Network outputs for one input vector or a batch of rows."""
    single = np.ndim(x) == 1
    _, y = _propagate(net, _as_inputs(net, x))
    return y[0] if single else y


def _check_targets(net, x, t):
    t = np.asarray(t, dtype=float)
    if t.ndim == 1:
        t = t[:, None] if net.layout.n_out == 1 and t.shape[0] == x.shape[0] else t[None, :]
    if t.shape != (x.shape[0], net.layout.n_out):
        raise ValueError(f"targets shape {t.shape} does not match outputs "
                         f"{(x.shape[0], net.layout.n_out)}")
    return t


def data_error_grad(net, inputs, targets):
    """
    Data error and its exact gradient by backpropagation.

    Logistic outputs use the cross-entropy summed over examples and outputs;
    linear outputs use half the sum of squared errors.
    """
    x = _as_inputs(net, inputs)
    t = _check_targets(net, x, targets)
    z, y = _propagate(net, x)
    if net.layout.output_kind == LOGISTIC:
        a = z @ net.w2 + net.b2
        # -[t log y + (1-t) log(1-y)] written in terms of the activation
        err = float(np.sum(np.logaddexp(0.0, a) - t * a))
    else:
        err = 0.5 * float(np.sum((y - t) ** 2))
    # both error functions share the output delta y - t
    delta_out = y - t
    g_w2 = z.T @ delta_out
    g_b2 = delta_out.sum(axis=0)
    delta_hid = (delta_out @ net.w2.T) * (1.0 - z * z)
    g_w1 = x.T @ delta_hid
    g_b1 = delta_hid.sum(axis=0)
    grad = np.concatenate([g_w1.ravel(), g_b1, g_w2.ravel(), g_b2])
    return ErrorGrad(err, grad)


def weight_penalty(layout, w, alphas):
    alphas = np.asarray(alphas, dtype=float)
    if alphas.shape != (layout.n_groups,):
        raise ValueError(f"expected {layout.n_groups} hyperparameters, got {alphas.shape}")
    if np.any(alphas < 0) or not np.all(np.isfinite(alphas)):
        raise ValueError("invalid hyperparameter")
    per_param = alphas[layout.group_index()]
    return 0.5 * float(np.sum(per_param * w * w)), per_param * w


def regularized_error_grad(net, inputs, targets, alphas):
    """Data error plus sum over groups of alpha_c * (sum of squared weights) / 2."""
    data = data_error_grad(net, inputs, targets)
    pen, pen_grad = weight_penalty(net.layout, net.params, alphas)
    return ErrorGrad(data.error + pen, data.grad + pen_grad)


def output_jacobian(net, inputs):
    """
    Derivatives of each output pre-activation with respect to every
    parameter, shape (N, n_out, n_params).
    """
    x = _as_inputs(net, inputs)
    n = x.shape[0]
    nh, no, n_in = net.layout.n_hidden, net.layout.n_out, net.layout.n_in
    z, _ = _propagate(net, x)
    dz = 1.0 - z * z
    jac = np.zeros((n, no, net.layout.n_params))
    i_b1 = n_in * nh
    i_w2 = i_b1 + nh
    i_b2 = i_w2 + nh * no
    for k in range(no):
        back = dz * net.w2[:, k]  # (N, nh)
        jac[:, k, :i_b1] = (x[:, :, None] * back[:, None, :]).reshape(n, -1)
        jac[:, k, i_b1:i_w2] = back
        w2_block = np.zeros((n, nh, no))
        w2_block[:, :, k] = z
        jac[:, k, i_w2:i_b2] = w2_block.reshape(n, -1)
        jac[:, k, i_b2 + k] = 1.0
    return jac


def gauss_newton_hessian(net, inputs):
    """
    Outer-product approximation to the Hessian of the data error.

    For logistic outputs with cross-entropy the per-output curvature weight
    is y(1-y); for linear outputs with squared error it is 1.
    """
    x = _as_inputs(net, inputs)
    jac = output_jacobian(net, x)
    if net.layout.output_kind == LOGISTIC:
        _, y = _propagate(net, x)
        jac = jac * np.sqrt(y * (1.0 - y))[:, :, None]
    flat = jac.reshape(-1, net.layout.n_params)
    return flat.T @ flat


def save_network_csv(net, path):
    lay = net.layout
    with open(path, "w") as fh:
        fh.write(f"#mlp,{lay.n_in},{lay.n_hidden},{lay.n_out},{lay.output_kind}\n")
        for v in net.params:
            fh.write(f"{v:.17g}\n")


def load_network_csv(path):
    with open(path) as fh:
        lines = [ln.strip() for ln in fh]
    head = lines[0].lstrip("#").split(",") if lines else []
    if len(head) != 5 or head[0] != "mlp":
        raise ValueError("line 1: bad network header")
    layout = Layout(int(head[1]), int(head[2]), int(head[3]), head[4])
    values = []
    for i, ln in enumerate(lines[1:], start=2):
        if not ln:
            continue
        try:
            v = float(ln)
        except ValueError:
            raise ValueError(f"line {i}: not a number: {ln!r}") from None
        if not np.isfinite(v):
            raise ValueError(f"line {i}: non-finite parameter")
        values.append(v)
    if len(values) != layout.n_params:
        raise ValueError(f"line {len(lines) + 1}: expected {layout.n_params} "
                         f"parameters, found {len(values)}")
    return unpack(layout, np.array(values))
