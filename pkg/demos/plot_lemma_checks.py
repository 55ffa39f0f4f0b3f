"""
Ratio curves for two growth lemmas
==================================

T(r, R(z, w)) / T(r, w) approaches deg_w R, and m(r, w(z+1)/w(z)) is
small against T(r, w) for functions of finite order.
"""

from malmquist_lab.frontend import parse, parse_expoly, parse_wrational
from malmquist_lab.nevanlinna import geometric_grid, log_diff_lemma_check, valiron_mohonko_check

grid = geometric_grid(10, 100, 8)

############################################################
# Composition with a rational function of w.

curve = valiron_mohonko_check(parse_wrational("w^2"), parse_expoly("exp(z)"), grid)
print("w^2:", [round(float(v), 3) for v in curve.values])

s = parse("a := z; rhs := ((exp(1)-exp(-1))*w^2 + (-z*(exp(1)-exp(-1)) + 2 + a)*w + a*(1-z))/w")
curve = valiron_mohonko_check(s.wrational("rhs"), parse_expoly("exp(z)+z"), grid)
print("divided quadratic:", [round(float(v), 3) for v in curve.values], "->", curve.asymptote)

############################################################
# Shift quotients.

for text in ("exp(z)", "exp(z)+z", "exp(2*pi*i*z)"):
    c = log_diff_lemma_check(parse_expoly(text), 1, grid)
    print(f"{text:15s}", [f"{v:.4f}" for v in c.values])
