"""Hermite expansions and the damped regularization of an ultradistribution.

The coefficients b_n = 1 do not decay, so the series is not a function.
Damping them by exp(-eps M(sqrt(n) h)^2) gives a smooth net whose
coefficients stay below exp(M(sqrt(n) h)) for every eps.
"""
import numpy as np

from colombeau.core import EpsilonGrid
from colombeau.hermite import HermiteExpansion, expand, verify_inclusion_bound
from colombeau.weights import gevrey

e = expand(lambda x: np.exp(-x**2 / 2) * np.cos(2 * x), 40)
print("first coefficients of exp(-x^2/2) cos(2x):", np.round(e.coefficients[:8], 6) + 0.0)
print(f"energy beyond n = 40: {e.tail_energy:.2e}")

grid = EpsilonGrid.geometric(12)
r = verify_inclusion_bound(HermiteExpansion(np.ones(129)), gevrey(2), 1.0, grid)
print(f"violations of |f_n| <= exp(M(sqrt n)): {len(r.violations)}")
print(f"limit of log C_eps: {r.limit_log_C:.6f}")
for eps, lc in zip(grid, r.constants.log_abs):
    print(f"  eps={eps:.6f}  log C_eps={lc:.6f}")
