"""Classify a few nets by how their weighted sup-seminorms scale with eps.

A mollifier sharpens like 1/eps, a net carrying exp(-1/eps) vanishes faster
than any power, and exp(x^2) escapes every polynomial weight.
"""
import math

from colombeau.core import EpsilonGrid, FunctionNet, GaussianPolynomial, gaussian, radial_polynomial
from colombeau.seminorms import classify_tempered

grid = EpsilonGrid.geometric(12)

nets = {
    "mollifier": FunctionNet.from_family(grid, lambda e: gaussian(1, 1 / e**2, 1 / (e * math.sqrt(math.pi)))),
    "exp(-1/eps) gaussian": FunctionNet.from_family(
        grid, lambda e: GaussianPolynomial(gaussian().terms, 1, log_scale=-1 / e)
    ),
    "(1 + x^2) / eps": FunctionNet.from_family(
        grid, lambda e: radial_polynomial([1.0, 1.0]).scaled(1 / e)
    ),
    "exp(x^2)": FunctionNet.from_family(grid, lambda e: gaussian(1, -1.0)),
}

for name, net in nets.items():
    r = classify_tempered(net)
    print(f"{name:22s} verdict={r.verdict:12s} weight q={r.q!s:3s} slope={r.fitted_order:8.4f} "
          f"boundary={r.boundary_flag}")

# the seminorm series itself, on a log scale so exp(-1/eps) stays representable
r = classify_tempered(nets["exp(-1/eps) gaussian"])
for eps, lv in zip(r.eps[::3], r.log_values[::3]):
    print(f"  eps={eps:.6f}  log mu = {lv:12.3f}")
