"""
Growth, zeros and deficiency
============================

Characteristic functions of exponential polynomials on a geometric grid.
T(r) is the circle mean of log+|f|, zeros come from quadrisection with
argument-principle counts, and N(r) is rebuilt from the located zeros.
"""

import numpy as np

from malmquist_lab.frontend import parse_expoly
from malmquist_lab.nevanlinna import characteristic_profile, counting_oracle, geometric_grid, locate_zeros

grid = geometric_grid(10, 1000, 24)

############################################################
# exp(z) + z takes every value, so its deficiencies vanish.

w = parse_expoly("exp(z) + z")
prof = characteristic_profile(w, 0, grid)
print("order     ", round(prof.order_estimate, 3))
print(f"deficiency {prof.deficiency_estimate:.3f}")
print("zeros in |z| <= 1000:", prof.zeros.total)
print(prof.to_csv().splitlines()[-1])

############################################################
# exp(z) omits 0 but not 1.

e = parse_expoly("exp(z)")
print(characteristic_profile(e, 0, grid).deficiency_estimate)
print(f"{characteristic_profile(e, 1, grid).deficiency_estimate:.4f}")

############################################################
# Two routes to N(r): located zeros against n(t)/t integrated from circle counts.

f = parse_expoly("(z-1)*exp(z) + 1")
zs = locate_zeros(f, 0, 18)
print(zs.zeros[:3])
N_loc = sum(m * (np.log(18) if z == 0 else np.log(18 / abs(z))) for z, m in zs.zeros)
print(N_loc, counting_oracle(f, 0, 18))
