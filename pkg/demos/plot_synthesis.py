"""
Synthesizing solution families
==============================

For the linear right-hand side a1 w + a0 the solver reads the frequency d
off a0/a at infinity, recovers H from H'/H = a0/a - d and then checks
H(z+1) e^d - H(z-1) e^-d = a1 H exactly.
"""

import json

from malmquist_lab.constfield import I, PI, cexp
from malmquist_lab.ratfun import RatFun
from malmquist_lab.synthesis import explain, linear_equation, solve_linear_form
from malmquist_lab.ddeq import verify_solution

z = RatFun.z()

############################################################
# a1 = 0: the periodic families C exp(p pi i z).

for p in (1, 2, 3):
    fam = solve_linear_form(z, 0, p * PI * I * z)
    print(p, fam)

############################################################
# The a1 = 2i branch admits a linear H.

a0 = 1 + PI * I / 2 * z
fam = solve_linear_form(z, 2 * I, a0)
print(fam, fam.branch)
eq = linear_equation(z, 2 * I, a0)
print([verify_solution(eq, fam.member(C)) for C in (1, 2, -3)])

############################################################
# A constant a1 must equal e^d - e^-d; 5 does not.

report = explain(z, 5, z)
print(json.dumps(report["steps"], indent=1))
print(solve_linear_form(z, cexp(1) - cexp(-1), z))
