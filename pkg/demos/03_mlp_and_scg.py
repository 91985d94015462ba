"""
Train a small classifier network with scaled conjugate gradients and
check its gradient against finite differences on the way.
"""
import numpy as np

from ardpca.mlp import LOGISTIC, Layout, data_error_grad, forward, init_network, unpack
from ardpca.scg import ScgOptions, minimize

rng = np.random.default_rng(1)

# two noisy interleaved half moons
n = 200
t = rng.uniform(0, np.pi, n)
upper = np.column_stack([np.cos(t), np.sin(t)])
lower = np.column_stack([1 - np.cos(t), 0.5 - np.sin(t)])
x = np.vstack([upper, lower]) + 0.1 * rng.standard_normal((2 * n, 2))
y = np.concatenate([np.zeros(n), np.ones(n)])[:, None]

layout = Layout(2, 8, 1, LOGISTIC)
net = init_network(layout, seed=3)

# spot check the backprop gradient on one coordinate
h = 1e-5
e = np.zeros(layout.n_params)
e[4] = h
fd = (data_error_grad(unpack(layout, net.params + e), x, y).error
      - data_error_grad(unpack(layout, net.params - e), x, y).error) / (2 * h)
print("gradient component 4: backprop", data_error_grad(net, x, y).grad[4], "finite diff", fd)


def objective(w):
    return data_error_grad(unpack(layout, w), x, y)


w, trace = minimize(objective, net.params, ScgOptions(max_iters=300))
print(f"cross-entropy {trace.errors[0]:.2f} -> {trace.errors[-1]:.2f} "
      f"in {trace.iterations} iterations ({trace.stop_reason})")
print("never increased:", bool(np.all(np.diff(trace.errors) <= 0)))

acc = np.mean((forward(unpack(layout, w), x) >= 0.5) == y)
print(f"training accuracy {100 * acc:.1f}%")
