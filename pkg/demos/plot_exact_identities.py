"""
Exact identities for the delay equation
=======================================

w(z+1) - w(z-1) + a(z) w'(z)/w(z) = R(z, w(z)) is checked symbolically:
constants live in a normal form, so exp(2*pi*i) really is 1 and the
residual of a true solution collapses to the empty exponential polynomial.
"""

from malmquist_lab import DelayEquation, classify, invert, verify_solution
from malmquist_lab.constfield import I, PI, cexp, is_zero
from malmquist_lab.frontend import parse, parse_expoly

############################################################
# Constants first.  Zero is decided structurally, nonzero by an interval.

print(cexp(2 * PI * I))                    # 1
print(is_zero(cexp(1) - cexp(-1)))         # NonZero
u = cexp(PI * I / 5)
print(is_zero(u**4 - u**3 + u**2 - u + 1))  # Unknown: reported, never guessed

############################################################
# A periodic solution plus a polynomial part.

s = parse("""
a   := -1/(pi*i)
rhs := (2*z - 1/(pi*i))/w
sol := exp(2*pi*i*z) + z
""")
eq = DelayEquation(s.ratfun("a"), s.wrational("rhs"))
print(eq)
print("verified:", verify_solution(eq, s.expoly("sol")))
print("exp(z) instead:", verify_solution(eq, parse_expoly("exp(z)")))

############################################################
# Going backwards: from w = H exp(dz) + r to the equation it solves.

z = s.ratfun("a").z()
eq = invert(1, 1, z, z)
print(eq.rhs)
form = classify(eq)
print(form.name, "| a2 =", form.a2, "| a1 =", form.a1, "| a0 =", form.a0)
print("round trip:", verify_solution(eq, parse_expoly("exp(z) + z")))
