"""The delay differential equation w(z+1) - w(z-1) + a(z) w'/w = P(z,w)/Q(z,w).

Provides the polynomial-in-w layer over rational functions, normalization
of the right-hand side, recognition of the two reduced forms, exact
verification of exponential-polynomial solutions, reconstruction of an
equation from a solution ``H exp(dz) + r``, and the rational-root
obstruction for entire solutions.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Union

from .constfield import cexp, const, is_zero, sqrt_exact
from .errors import ConstZeroDivisionError, MalmquistError, UndecidableError
from .expoly import ExpoPoly, ExpoRational, expoly
from .ratfun import Poly, RatFun, _top_level_sum, ratfun


class WPoly:
    """Polynomial in w with rational-function coefficients (``coeffs[k]`` * w**k)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [ratfun(c) for c in coeffs]
        while cs and cs[-1].is_zero():
            cs.pop()
        self.coeffs: tuple[RatFun, ...] = tuple(cs)

    @classmethod
    def w(cls) -> "WPoly":
        return cls([0, 1])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> RatFun:
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> RatFun:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else RatFun(0)

    def __eq__(self, other):
        other = _coerce_w(other)
        if other is None:
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other):
        other = _coerce_w(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return WPoly([self[k] + other[k] for k in range(n)])

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce_w(other)
        if other is None:
            return NotImplemented
        n = max(len(self.coeffs), len(other.coeffs))
        return WPoly([self[k] - other[k] for k in range(n)])

    def __rsub__(self, other):
        return _coerce_w(other) - self

    def __neg__(self):
        return WPoly([-c for c in self.coeffs])

    def __mul__(self, other):
        other = _coerce_w(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return WPoly()
        out = [RatFun(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j, b in enumerate(other.coeffs):
                if not b.is_zero():
                    out[i + j] = out[i + j] + a * b
        return WPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = WPoly([1])
        for _ in range(n):
            out = out * self
        return out

    def scale(self, c) -> "WPoly":
        c = ratfun(c)
        return WPoly([a * c for a in self.coeffs])

    def divmod(self, other: "WPoly") -> tuple["WPoly", "WPoly"]:
        if other.is_zero():
            raise ConstZeroDivisionError("division by the zero polynomial in w")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return WPoly(), self
        quot = [RatFun(0)] * (len(rem) - dq)
        for k in range(len(rem) - 1, dq - 1, -1):
            if rem[k].is_zero():
                continue
            t = rem[k] / other.lc
            quot[k - dq] = t
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - t * b
        return WPoly(quot), WPoly(rem[:dq])

    def monic(self) -> "WPoly":
        return self.scale(RatFun(1) / self.lc)

    def at(self, w):
        """Horner evaluation at an ExpoPoly, RatFun or constant."""
        if isinstance(w, ExpoPoly):
            out = ExpoPoly()
            for c in reversed(self.coeffs):
                out = out * w + ExpoPoly([(0, c)])
            return out
        w = ratfun(w)
        out = RatFun(0)
        for c in reversed(self.coeffs):
            out = out * w + c
        return out

    def evaluate(self, z, w):
        """Floating value of P(z, w) for arrays ``z`` and ``w``."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * w + c.evaluate(z)
        return out

    def __str__(self):
        if not self.coeffs:
            return "0"
        parts = []
        for k in range(self.degree, -1, -1):
            c = self.coeffs[k]
            if c.is_zero():
                continue
            cs = str(c)
            mono = "" if k == 0 else ("w" if k == 1 else f"w^{k}")
            if not mono:
                parts.append(cs)
            elif cs == "1":
                parts.append(mono)
            elif _top_level_sum(cs) or "/" in cs:
                parts.append(f"({cs})*{mono}")
            else:
                parts.append(f"{cs}*{mono}")
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    def __repr__(self):
        return f"WPoly({self})"


def _coerce_w(x) -> WPoly | None:
    if isinstance(x, WPoly):
        return x
    try:
        return WPoly([ratfun(x)])
    except TypeError:
        return None


def wpoly_gcd(a: WPoly, b: WPoly) -> WPoly:
    """Monic gcd in w over the field of rational functions of z."""
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic() if not a.is_zero() else a


class WRational:
    """P/Q irreducible in w with Q monic in w."""

    __slots__ = ("P", "Q")

    def __init__(self, P, Q=None, _normalized: bool = False):
        P = P if isinstance(P, WPoly) else WPoly([P]) if not isinstance(P, (list, tuple)) else WPoly(P)
        Q = WPoly([1]) if Q is None else (Q if isinstance(Q, WPoly) else WPoly([Q]))
        if Q.is_zero():
            raise ConstZeroDivisionError("rational function in w with zero denominator")
        if not _normalized:
            P, Q = _normalize_pair(P, Q)
        self.P = P
        self.Q = Q

    @property
    def degree(self) -> int:
        """deg_w(R) = max(deg_w P, deg_w Q)."""
        return max(self.P.degree, self.Q.degree)

    def __eq__(self, other):
        if not isinstance(other, WRational):
            return NotImplemented
        return self.P == other.P and self.Q == other.Q

    def __hash__(self):
        return hash((self.P, self.Q))

    def substitute(self, w: ExpoPoly) -> ExpoRational:
        return substitute(self, w)

    def evaluate(self, z, w):
        return self.P.evaluate(z, w) / self.Q.evaluate(z, w)

    def __str__(self):
        if self.Q.degree == 0 and self.Q.coeffs[0] == RatFun(1):
            return str(self.P)
        q = str(self.Q)
        if not re.fullmatch(r"w(\^\d+)?", q):
            q = f"({q})"
        return f"({self.P})/{q}"

    def __repr__(self):
        return f"WRational({self})"


def _normalize_pair(P: WPoly, Q: WPoly) -> tuple[WPoly, WPoly]:
    if P.is_zero():
        return P, WPoly([1])
    if Q.degree > 0:
        g = wpoly_gcd(P, Q)
        if g.degree > 0:
            P = P.divmod(g)[0]
            Q = Q.divmod(g)[0]
    lc = Q.lc
    if lc != RatFun(1):
        inv = RatFun(1) / lc
        P, Q = P.scale(inv), Q.scale(inv)
    return P, Q


def normalize_rhs(P, Q) -> WRational:
    """Remove the w-gcd of P and Q and make Q monic in w."""
    return WRational(P, Q)


@dataclass(frozen=True)
class DelayEquation:
    """w(z+1) - w(z-1) + a(z) w'(z)/w(z) = rhs(z, w(z))."""

    a: RatFun
    rhs: WRational

    def __post_init__(self):
        if self.rhs.P.is_zero():
            raise MalmquistError("the right-hand side must not vanish identically")

    def __str__(self):
        return f"w(z+1) - w(z-1) + ({self.a})*w'(z)/w(z) = {self.rhs}"


@dataclass(frozen=True)
class Linear:
    """rhs = a1 w + a0."""

    a1: RatFun
    a0: RatFun
    name = "linear"


@dataclass(frozen=True)
class DividedQuadratic:
    """rhs = (a2 w^2 + a1 w + a0) / w with a0 not identically 0."""

    a2: RatFun
    a1: RatFun
    a0: RatFun
    name = "divided-quadratic"


@dataclass(frozen=True)
class NotReduced:
    reason: str
    name = "not-reduced"


ReducedForm = Union[Linear, DividedQuadratic, NotReduced]


def classify(eq: DelayEquation) -> ReducedForm:
    """Match the right-hand side against the two reduced forms."""
    P, Q = eq.rhs.P, eq.rhs.Q
    if Q.degree == 0:
        if P.degree <= 1:
            return Linear(a1=P[1], a0=P[0])
        return NotReduced(f"deg_w Q = 0 but deg_w P = {P.degree} > 1")
    if Q.degree == 1 and Q[0].is_zero() and Q[1] == RatFun(1):
        if P.degree > 2:
            return NotReduced(f"Q = w but deg_w P = {P.degree} > 2")
        if P[0].is_zero():
            raise MalmquistError("normalized rhs with Q = w has P(z, 0) = 0")
        return DividedQuadratic(a2=P[2], a1=P[1], a0=P[0])
    return NotReduced(f"denominator {Q} is neither 1 nor w")


def substitute(R: WRational, w) -> ExpoRational:
    """R(z, w(z)) as a quotient of exponential polynomials."""
    w = expoly(w)
    num = R.P.at(w)
    den = R.Q.at(w)
    if den.is_identically_zero():
        raise MalmquistError("solution hits denominator identically: Q(z, w(z)) = 0")
    return ExpoRational(num, den)


def lhs(eq: DelayEquation, w: ExpoPoly) -> ExpoRational:
    """w(z+1) - w(z-1) + a w'/w as a single quotient over w."""
    delta = w.shift(1) - w.shift(-1)
    return ExpoRational(delta * w + w.derivative() * ExpoPoly([(0, eq.a)]), w)


def residual(eq: DelayEquation, w) -> ExpoPoly:
    """Numerator of lhs - rhs after clearing the denominator w * Q(z, w)."""
    w = expoly(w)
    left = lhs(eq, w)
    right = substitute(eq.rhs, w)
    return left.num * right.den - right.num * w


def verify_solution(eq: DelayEquation, w) -> bool:
    """Exact check that the entire function ``w`` solves ``eq``."""
    w = expoly(w)
    if w.is_identically_zero():
        raise MalmquistError("candidate solution is identically zero")
    if not w.is_entire():
        raise MalmquistError(f"candidate solution {w} is not entire (non-polynomial coefficient)")
    try:
        res = residual(eq, w)
    except UndecidableError as exc:
        raise UndecidableError(f"undecidable identity: {exc}", exc.subject, exc.bits) from exc
    return res.is_zero().is_zero


def invert(H, d, r, a) -> DelayEquation:
    """The equation solved by ``w = H exp(dz) + r`` for the given ``a``.

    Uses exp(dz) = (w - r)/H to eliminate the exponential from
    w(z+1) - w(z-1) and a w'/w, leaving a right-hand side of the form
    (c2 w^2 + c1 w + c0)/w.
    """
    H = H if isinstance(H, Poly) else ratfun(H).num if ratfun(H).is_polynomial() else None
    if H is None:
        raise MalmquistError("H must be a polynomial")
    if H.is_zero():
        raise MalmquistError("H must not vanish identically")
    d = const(d)
    v = is_zero(d)
    if v.is_zero:
        raise MalmquistError("degenerate frequency: d = 0")
    if v.is_unknown:
        raise UndecidableError(f"degenerate frequency: cannot decide d = {d} != 0", d, v.bits)
    r = ratfun(r)
    if not r.is_polynomial():
        raise MalmquistError("r must be a polynomial for w = H exp(dz) + r to be entire")
    a = ratfun(a)
    Hr = RatFun(H)
    s = RatFun(H.shift(1)) * cexp(d) - RatFun(H.shift(-1)) * cexp(-d)
    g = RatFun(H.derivative()) / Hr + d  # H'/H + d
    dr = r.shift(1) - r.shift(-1)
    c2 = s / Hr
    c1 = dr - s * r / Hr + a * g
    c0 = a * (r.derivative() - r * g)
    rhs = WRational(WPoly([c0, c1, c2]), WPoly([0, 1]))
    return DelayEquation(a, rhs)


def _rational_roots(Q: WPoly) -> list[RatFun] | None:
    """Roots of Q in the rational functions of z; None when undeterminable."""
    if Q.degree == 1:
        return [-Q[0] / Q[1]]
    if Q.degree == 2:
        a2, a1, a0 = Q[2], Q[1], Q[0]
        disc = a1 * a1 - a2 * a0 * 4
        s = ratfun_sqrt(disc)
        if s is None:
            return None
        return [(-a1 + s) / (a2 * 2), (-a1 - s) / (a2 * 2)]
    return None


def poly_sqrt(p: Poly) -> Poly | None:
    """Exact square root of a polynomial over the constant field, or None."""
    if p.is_zero():
        return p
    if p.degree % 2:
        return None
    lead = sqrt_exact(p.lc)
    if lead is None:
        return None
    m = p.degree // 2
    # top-down: root coefficients r_m..r_0 from the upper half of p
    r = [const(0)] * (m + 1)
    r[m] = lead
    for k in range(m - 1, -1, -1):
        # coefficient of z^(m+k) in (sum r_j z^j)^2
        acc = p[m + k]
        for j in range(k + 1, m):
            if m + k - j > k and m + k - j <= m:
                acc = acc - r[j] * r[m + k - j]
        r[k] = acc / (lead * 2)
    root = Poly(r)
    if not (root * root - p).is_zero():
        return None
    return root


def ratfun_sqrt(f: RatFun) -> RatFun | None:
    n = poly_sqrt(f.num)
    if n is None:
        return None
    d = poly_sqrt(f.den)
    if d is None:
        return None
    return RatFun(n, d)


def entire_obstruction(eq: DelayEquation) -> str:
    """'obstructed', 'not-obstructed' or 'undetermined'.

    Obstructed when the denominator Q(z, w) has a root that is a nonzero
    rational function of z and not a root of P; such equations admit no
    transcendental entire solution of hyper-order below one.
    """
    Q, P = eq.rhs.Q, eq.rhs.P
    if Q.degree == 0:
        return "not-obstructed"
    if Q.degree > 2:
        return "undetermined"
    try:
        roots = _rational_roots(Q)
        if roots is None:
            return "undetermined"
        for root in roots:
            if root.is_zero():
                continue
            if not P.at(root).is_zero():
                return "obstructed"
    except UndecidableError:
        return "undetermined"
    return "not-obstructed"
