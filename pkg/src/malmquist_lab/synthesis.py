"""Solutions C H(z) exp(dz) of w(z+1) - w(z-1) + a w'/w = a1 w + a0.

Substituting w = H exp(dz) and separating the exp(dz) part from the rest
gives two conditions:

    a0 = a (H'/H + d)                      (pins d and H)
    H(z+1) e^d - H(z-1) e^-d = a1 H        (the shift condition)

The solver reads d off the behaviour of a0/a at infinity, recovers H from
its logarithmic derivative, then checks the shift condition exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .constfield import I, ConstExpr, cexp, const, is_zero
from .ddeq import DelayEquation, Linear, WPoly, WRational, classify
from .errors import MalmquistError, UndecidableError
from .expoly import ExpoPoly
from .ratfun import Poly, RatFun, ratfun, solve_poly_logderiv


@dataclass(frozen=True)
class SolutionFamily:
    """Either no solution in the class, or the family C*H(z)*exp(d z), C != 0."""

    kind: str  # "none" | "scalar"
    H: Poly | None = None
    d: ConstExpr | None = None
    branch: str = "generic"
    trace: tuple = ()
    warnings: tuple = ()

    @property
    def found(self) -> bool:
        return self.kind == "scalar"

    def member(self, C=1) -> ExpoPoly:
        if not self.found:
            raise MalmquistError("empty family has no members")
        return ExpoPoly.term(RatFun(self.H) * ratfun(C), self.d)

    def __str__(self):
        if not self.found:
            return "no solution of the form H(z)exp(dz)"
        return f"C*{self.member()}"


def _decide(c: ConstExpr, what: str) -> bool:
    """True when c is certified zero."""
    v = is_zero(c)
    if v.is_unknown:
        raise UndecidableError(f"undecidable: cannot decide whether {what} vanishes", c, v.bits)
    return v.is_zero


def _branch(a1: RatFun) -> str:
    if a1.is_zero():
        return "a1=0"
    if not a1.is_constant():
        return "a1 nonconstant"
    c = a1.constant_value()
    if _decide(c - 2 * I, "a1 - 2i"):
        return "a1=2i"
    if _decide(c + 2 * I, "a1 + 2i"):
        return "a1=-2i"
    return "generic"


def linear_equation(a, a1, a0) -> DelayEquation:
    return DelayEquation(ratfun(a), WRational(WPoly([a0, a1])))


def solve_linear_form(a, a1, a0) -> SolutionFamily:
    """Find the family C H(z) exp(dz) solving the linear reduced form, if any."""
    a, a1, a0 = ratfun(a), ratfun(a1), ratfun(a0)
    if a.is_zero():
        raise MalmquistError("precondition: a must not vanish identically")
    if a1.is_zero() and a0.is_zero():
        raise MalmquistError("precondition: a1 and a0 vanish together")
    trace: list[dict[str, Any]] = []
    warnings: list[str] = []
    if not a1.is_polynomial():
        warnings.append(
            "a1 is not a polynomial: the search covers only the H(z)exp(dz) class "
            "and H may have degree above 1"
        )
    branch = _branch(a1)
    trace.append({"step": "branch", "a1": str(a1), "branch": branch})

    def none(reason: str) -> SolutionFamily:
        trace.append({"step": "result", "found": False, "reason": reason})
        return SolutionFamily("none", branch=branch, trace=tuple(trace), warnings=tuple(warnings))

    q = a0 / a
    if q.num.degree > q.den.degree:
        trace.append({"step": "d", "q": str(q), "bounded": False})
        return none(f"q = a0/a = {q} is unbounded at infinity")
    d = q.num.lc / q.den.lc if q.num.degree == q.den.degree else const(0)
    if _decide(d, "d"):
        trace.append({"step": "d", "q": str(q), "bounded": True, "d": "0"})
        return none("d = 0: exp(dz) is not transcendental")
    trace.append({"step": "d", "q": str(q), "bounded": True, "d": str(d)})

    f = q - d
    H = solve_poly_logderiv(f)
    if H is None:
        trace.append({"step": "H", "f": str(f), "solved": False})
        return none(f"H'/H = {f} has no polynomial solution")
    trace.append({"step": "H", "f": str(f), "solved": True, "H": str(H), "deg_H": H.degree})
    if H.degree >= 2:
        warnings.append(f"deg H = {H.degree} exceeds 1")

    lam = cexp(d)
    Hr = RatFun(H)
    res = RatFun(H.shift(1)) * lam - RatFun(H.shift(-1)) * cexp(-d) - a1 * Hr
    zero = res.is_zero()
    trace.append({"step": "shift-condition", "residual": str(res), "verdict": "Zero" if zero else "NonZero"})
    if not zero:
        return none("shift condition H(z+1)e^d - H(z-1)e^-d = a1 H fails")
    trace.append({"step": "result", "found": True, "family": f"C*{ExpoPoly.term(Hr, d)}"})
    return SolutionFamily("scalar", H, d, branch, tuple(trace), tuple(warnings))


def explain(a, a1, a0, family: SolutionFamily | None = None) -> dict:
    """Structured derivation trace, ready for JSON."""
    if family is None:
        family = solve_linear_form(a, a1, a0)
    return {
        "equation": str(linear_equation(a, a1, a0)),
        "found": family.found,
        "branch": family.branch,
        "H": None if family.H is None else str(family.H),
        "d": None if family.d is None else str(family.d),
        "family": str(family),
        "steps": list(family.trace),
        "warnings": list(family.warnings),
        "note": "d is fixed by a0 = a(H'/H + d), so a single frequency is returned",
    }


def solve_equation(eq: DelayEquation, form=None) -> SolutionFamily:
    """Convenience wrapper for an equation already in the linear reduced form."""
    form = form or classify(eq)
    if not isinstance(form, Linear):
        raise MalmquistError(f"equation is not in the linear reduced form ({form.name})")
    return solve_linear_form(eq.a, form.a1, form.a0)
