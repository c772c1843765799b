"""Gevrey weight sequences: the standard conditions and the associated function."""
import math

import numpy as np

from colombeau.weights import associated_function, check_conditions, gevrey

for s in (1, 1.5, 2):
    r = check_conditions(gevrey(s, 2000))
    tail = f"sum -> {r.m3_limit_estimate:.8f}" if r.m3_converged else f"diverges (decay exponent {r.m3_decay_exponent:.3f})"
    print(f"gevrey({s}): log-convex={r.m1}  stable={r.m2} (c={r.m2_c:g}, H={r.m2_H:g})  {tail}")
print(f"pi^2/6 = {math.pi**2 / 6:.8f}")

rho = np.array([0.0, 1.0, math.e, 10.0, 100.0])
v = associated_function(gevrey(1, 256), rho)
for r_, m, p in zip(rho, v.value, v.argmax):
    print(f"M({r_:8.4f}) = {m:10.6f} at p = {p}")
# with too few stored weights the sup sits at the last index and is flagged
print("truncated with p_max = 64:", associated_function(gevrey(1, 64), 100.0).truncated)
