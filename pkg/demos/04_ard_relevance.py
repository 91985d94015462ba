"""
Automatic relevance determination on a regression problem where only the
first five of ten inputs matter.
"""
import numpy as np

from ardpca.ard import ArdOptions, ard_train
from ardpca.mlp import LINEAR, Layout
from ardpca.synthdata import relevance_problem

ds = relevance_problem(seed=1)
layout = Layout(ds.d, 8, 1, LINEAR)
net, state = ard_train(ds.inputs, ds.labels, layout, ArdOptions(), seed=1)

print("input  coefficient  alpha        gamma")
coefficients = [1.0, 0.8, 0.6, 0.4, 0.2] + [0.0] * 5
for i in range(ds.d):
    print(f"{i:5d}  {coefficients[i]:11.1f}  {state.alphas[i]:11.4g}  {state.gammas[i]:5.2f}")

print("relevance order:", state.relevance)
relevant = state.input_alphas[:5].max()
noise = state.input_alphas[5:].min()
print(f"smallest noise alpha is {noise / relevant:.0f}x the largest relevant alpha")

# more cycles push the irrelevant groups onto the upper clamp
_, longer = ard_train(ds.inputs, ds.labels, layout, ArdOptions(cycles=5), seed=1)
print("after 5 cycles:", np.array2string(longer.input_alphas, precision=3))
