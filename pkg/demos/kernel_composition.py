"""Compose damped integral operators and check the composed kernel.

Applying the composed operator must agree with applying the two operators in
turn.  For twin Gaussian kernels the composed kernel is known in closed form.
For x^2 y^2 kernels it grows like eps^(-5/2), half a power more than the
weights alone suggest, because the middle integral contributes eps^(-1/2).
"""
import math

import numpy as np

from colombeau.core import EpsilonGrid, FunctionNet, gaussian, monomial
from colombeau.operators import GeneralizedOperator, KernelNet, compose, kernel_growth_check, verify_composition

grid = EpsilonGrid.geometric(8)


def operator(kernel):
    return GeneralizedOperator(KernelNet(grid, [kernel] * len(grid), 1), nodes=64)


G = operator(gaussian(2))
C = compose(G, G)
xy = np.array([[0.5, -1.0], [1.5, 0.2]])
for eps in grid[::3]:
    closed = math.sqrt(math.pi / (2 + eps)) * np.exp(-np.sum(xy**2, axis=1))
    print(f"eps={eps:.5f} composed={C.kernel[eps](xy)} closed form={closed}")

phi = FunctionNet(grid, [gaussian()] * len(grid))
pts = np.linspace(-2, 2, 25)
M = operator(monomial([2, 2]))
for eps in grid:
    r = verify_composition(M, M, phi, eps, pts)
    print(f"eps={eps:.5f} max scaled discrepancy {r.max_discrepancy:.2e}  absolute {r.max_abs_discrepancy:.2e}")

growth = kernel_growth_check(compose(M, M), 2, 2)
print(f"slope {growth.slope:.4f}; (q1+q2)/2 = {growth.nominal_exponent}, (q1+q2+n)/2 = {growth.corrected_exponent}")
print(growth.note)
