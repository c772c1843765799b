"""Sum exp(A) phi for a rank-one kernel and compare with the scalar series.

With K(x, y) = a h_0(x) h_0(y) and phi = h_0 every power of A maps h_0 to a
multiple of itself, so exp(A) h_0 = exp(c) h_0 with c = a / sqrt(1 + eps).
"""
import math

import numpy as np

from colombeau.core import EpsilonGrid, tensor_product
from colombeau.hermite import HermiteExpansion, hermite_function
from colombeau.operators import GeneralizedOperator, KernelNet, exp_apply

a = 1.5
grid = EpsilonGrid.geometric(6)
h0 = HermiteExpansion.unit(0).field()
K = tensor_product(h0, h0).scaled(a)
A = GeneralizedOperator(KernelNet(grid, [K] * len(grid), 1))

x = np.array([0.0, 0.5, 1.0])
for eps in grid:
    c = a / math.sqrt(1 + eps)
    res = exp_apply(A, h0, eps, x, K_max=30, tol=1e-15)
    err = np.max(np.abs(res.value - math.exp(c) * hermite_function(0, x)))
    print(f"eps={eps:.4f} terms={res.k_used:2d} error={err:.1e}")

res = exp_apply(A, h0, grid[-1], x, K_max=30, tol=1e-15)
c = a / math.sqrt(1 + grid[-1])
print(" k   ratio      c/(k+1)")
for k, r in enumerate(res.ratios[:8], start=1):
    print(f"{k:2d}  {r:.8f}  {c / (k + 1):.8f}")
