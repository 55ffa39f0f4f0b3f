"""Univariate polynomials and rational functions in z over ConstExpr."""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from sympy.polys.domains import QQ_I
from sympy.polys.rings import PolyRing

from .constfield import (
    ConstExpr,
    as_fraction,
    as_gaussian,
    const,
    eval_interval,
    from_gaussian,
    is_zero,
)
from .errors import ConstZeroDivisionError, UndecidableError


def _nonzero(c: ConstExpr, what: str = "coefficient") -> bool:
    """True/False for a decided verdict; raises on Unknown."""
    if c.is_structural_zero():
        return False
    v = is_zero(c)
    if v.is_unknown:
        raise UndecidableError(f"undecidable {what}: cannot decide whether {c} is 0", c, v.bits)
    return v.is_nonzero


class Poly:
    """Dense polynomial; ``coeffs[k]`` multiplies ``z**k``."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [const(c) for c in coeffs]
        while cs and not _nonzero(cs[-1]):
            cs.pop()
        self.coeffs: tuple[ConstExpr, ...] = tuple(cs)

    @classmethod
    def _raw(cls, coeffs: Sequence[ConstExpr]) -> "Poly":
        """Trust the caller: trailing coefficient already decided nonzero."""
        p = cls.__new__(cls)
        p.coeffs = tuple(coeffs)
        return p

    @classmethod
    def z(cls) -> "Poly":
        return cls([0, 1])

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lc(self) -> ConstExpr:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def __getitem__(self, k: int) -> ConstExpr:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else const(0)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] + other[k] for k in range(n)])

    def __sub__(self, other: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly([self[k] - other[k] for k in range(n)])

    def __neg__(self) -> "Poly":
        return Poly._raw([-c for c in self.coeffs])

    def __mul__(self, other: "Poly") -> "Poly":
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [const(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a.is_structural_zero():
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def scale(self, c) -> "Poly":
        c = const(c)
        if c.is_structural_zero():
            return Poly()
        return Poly([a * c for a in self.coeffs])

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ConstZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if len(rem) - 1 < dq:
            return Poly(), self
        quot = [const(0)] * (len(rem) - dq)
        inv = 1 / other.lc
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c.is_structural_zero():
                continue
            t = c * inv
            quot[k - dq] = t
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] = rem[k - dq + j] - t * b
            rem[k] = const(0)
        return Poly(quot), Poly(rem[:dq])

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def derivative(self) -> "Poly":
        return Poly([self.coeffs[k] * k for k in range(1, len(self.coeffs))])

    def shift(self, c) -> "Poly":
        """p(z + c), expanded by Horner recomposition."""
        c = const(c)
        lin = Poly([c, 1])
        out = Poly()
        for a in reversed(self.coeffs):
            out = out * lin + Poly([a])
        return out

    def __call__(self, x):
        """Exact value at a constant."""
        x = const(x)
        out = const(0)
        for a in reversed(self.coeffs):
            out = out * x + a
        return out

    def numeric_coeffs(self) -> np.ndarray:
        return np.array([complex(c) for c in self.coeffs], dtype=complex)

    def evaluate(self, z):
        """Floating-point value at ``z`` (scalar or ndarray)."""
        cs = self.numeric_coeffs()
        if cs.size == 0:
            return np.zeros_like(np.asarray(z, dtype=complex))
        return np.polyval(cs[::-1], z)

    def __str__(self):
        return _fmt_poly(self)

    def __repr__(self):
        return f"Poly({self})"


def _gauss_coeffs(p: Poly):
    """Coefficients as sympy Gaussian rationals, or None if any is transcendental."""
    out = []
    for c in p.coeffs:
        g = as_gaussian(c)
        if g is None:
            return None
        out.append(g)
    return out


_ZRING = PolyRing("z", QQ_I)


def _to_sympy(cs) -> object:
    return _ZRING.from_dict({(k,): c for k, c in enumerate(cs) if c})


def _from_sympy(p) -> Poly:
    deg = p.degree()
    cs = [0] * (deg + 1)
    for (k,), c in p.items():
        cs[k] = from_gaussian(c)
    return Poly(cs)


def _numerically_coprime(a: Poly, b: Poly, digits: int = 38) -> bool:
    """Roots of the lower-degree side at high precision never annihilate the other.

    Coprime pairs are the common case; this lets them skip Euclid, whose
    intermediate constants swell badly over transcendental coefficients.
    A suspected common root sends the pair down the exact path.
    """
    if a.degree < b.degree:
        a, b = b, a
    bits = int(digits * 3.33) + 16
    ca = [eval_interval(c, bits).mid_mp() for c in a.coeffs]
    cb = [eval_interval(c, bits).mid_mp() for c in b.coeffs]
    with mpmath.workdps(digits):
        try:
            roots = mpmath.polyroots(cb[::-1], maxsteps=200, extraprec=2 * bits)
        except mpmath.libmp.NoConvergence:
            return False
        for rho in roots:
            val = mpmath.polyval(ca[::-1], rho)
            scale = sum(abs(c) * abs(rho) ** k for k, c in enumerate(ca))
            if abs(val) <= mpmath.mpf(10) ** (-digits // 3) * scale:
                return False
    return True


def _euclid(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.monic()


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd over the constant field.

    When one argument has Gaussian-rational coefficients it is factored over
    Q(i) and each factor is tested by exact division; otherwise the plain
    Euclidean algorithm runs with tri-state zero tests on the remainders.
    """
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()
    if a.degree == 0 or b.degree == 0:
        return Poly([1])
    ga, gb = _gauss_coeffs(a), _gauss_coeffs(b)
    if ga is not None and gb is not None:
        return _from_sympy(_to_sympy(ga).gcd(_to_sympy(gb))).monic()
    if gb is None:
        a, b, gb = b, a, ga
    if gb is None:
        if _numerically_coprime(a, b):
            return Poly([1])
        return _euclid(a, b)
    g = Poly([1])
    for fac, mult in _to_sympy(gb).factor_list()[1]:
        f = _from_sympy(fac)
        rest = a
        for _ in range(mult):
            q, r = rest.divmod(f)
            if not r.is_zero():
                break
            g = g * f
            rest = q
    return g.monic()


_ATOM = re.compile(r"z(\^\d+)?")


def _top_level_sum(s: str) -> bool:
    depth = 0
    for k, ch in enumerate(s):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch in "+-" and depth == 0 and k > 0:
            return True
    return False


def _fmt_coef(c: ConstExpr) -> tuple[str, bool]:
    s = str(c)
    return s, not _top_level_sum(s)


def _fmt_poly(p: Poly, var: str = "z") -> str:
    if p.is_zero():
        return "0"
    parts = []
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c.is_structural_zero():
            continue
        s, simple = _fmt_coef(c)
        neg = simple and s.startswith("-")
        if neg:
            s = s[1:]
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        alone = not mono and not parts and all(c.is_structural_zero() for c in p.coeffs[1:])
        if not simple and not alone:
            s = f"({s})"
        if mono:
            body = mono if s == "1" else f"{s}*{mono}"
        else:
            body = s
        if not parts:
            parts.append(("-" if neg else "") + body)
        else:
            parts.append((" - " if neg else " + ") + body)
    return "".join(parts)


class RatFun:
    """num/den in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, _reduced: bool = False):
        num = _as_poly(num)
        den = Poly([1]) if den is None else _as_poly(den)
        if den.is_zero():
            raise ConstZeroDivisionError("rational function with zero denominator")
        if not _reduced:
            if num.is_zero():
                den = Poly([1])
            elif den.degree > 0:
                g = poly_gcd(num, den)
                if g.degree > 0:
                    num = num.divmod(g)[0]
                    den = den.divmod(g)[0]
            lc = den.lc
            if lc != 1:
                inv = 1 / lc
                num, den = num.scale(inv), den.scale(inv)
        self.num = num
        self.den = den

    # -- constructors -----------------------------------------------------
    @classmethod
    def z(cls) -> "RatFun":
        return cls(Poly.z(), _reduced=True)

    @classmethod
    def constant(cls, c) -> "RatFun":
        return cls(Poly([c]), _reduced=True)

    # -- predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def is_constant(self) -> bool:
        return self.den.degree == 0 and self.num.degree <= 0

    def constant_value(self) -> ConstExpr:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0]

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash((self.num, self.den))

    # -- arithmetic -----------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        return RatFun(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.den == other.den:
            return RatFun(self.num - other.num, self.den)
        return RatFun(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return RatFun(-self.num, self.den, _reduced=True)

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if self.is_polynomial() and other.is_polynomial():
            return RatFun(self.num * other.num, _reduced=True)
        return RatFun(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        if other.is_zero():
            raise ConstZeroDivisionError("division by the zero rational function")
        return RatFun(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other):
        return _coerce(other) / self

    def __pow__(self, n: int):
        if n < 0:
            return RatFun(1) / self**(-n)
        out = RatFun(1)
        for _ in range(n):
            out = out * self
        return out

    # -- calculus and shifts ----------------------------------------------
    def derivative(self) -> "RatFun":
        n, d = self.num, self.den
        return RatFun(n.derivative() * d - n * d.derivative(), d * d)

    def shift(self, c) -> "RatFun":
        return RatFun(self.num.shift(c), self.den.shift(c))

    # -- evaluation ---------------------------------------------------------
    def __call__(self, x) -> ConstExpr:
        d = self.den(x)
        if d.is_structural_zero():
            raise ConstZeroDivisionError(f"{self} has a pole at {x}")
        return self.num(x) / d

    def evaluate(self, z):
        """Floating value; raises at an exact floating pole."""
        d = self.den.evaluate(z)
        if np.any(d == 0):
            raise ConstZeroDivisionError(f"evaluation of {self} at a pole")
        return self.num.evaluate(z) / d

    def __str__(self):
        if self.is_polynomial():
            return str(self.num)
        n, d = str(self.num), str(self.den)
        if _top_level_sum(n):
            n = f"({n})"
        if not _ATOM.fullmatch(d):
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self):
        return f"RatFun({self})"


def _as_poly(x) -> Poly:
    if isinstance(x, Poly):
        return x
    if isinstance(x, (list, tuple)):
        return Poly(x)
    return Poly([x])


def _coerce(x) -> RatFun | None:
    if isinstance(x, RatFun):
        return x
    if isinstance(x, Poly):
        return RatFun(x, _reduced=True)
    if isinstance(x, (int, Fraction, ConstExpr)) and not isinstance(x, bool):
        return RatFun(Poly([x]), _reduced=True)
    return None


def ratfun(x) -> RatFun:
    r = _coerce(x)
    if r is None:
        raise TypeError(f"cannot make a rational function from {type(x).__name__}")
    return r


Z = RatFun.z()


def arith(f, g, op: str) -> RatFun:
    """Exact ``f op g`` for op in ``+ - * /``."""
    f, g = ratfun(f), ratfun(g)
    if op == "+":
        return f + g
    if op in ("-", "−"):
        return f - g
    if op in ("*", "×"):
        return f * g
    if op in ("/", "÷"):
        return f / g
    raise ValueError(f"unknown operator {op!r}")


def shift(f, c) -> RatFun:
    return ratfun(f).shift(c)


def log_derivative(p: Poly) -> RatFun:
    """p'/p in lowest terms."""
    p = _as_poly(p)
    if p.is_zero():
        raise ConstZeroDivisionError("logarithmic derivative of the zero polynomial")
    return RatFun(p.derivative(), p)


def solve_linear(rows: list[list[ConstExpr]], rhs: list[ConstExpr]) -> list[ConstExpr] | None:
    """Solve ``rows @ x = rhs`` exactly; None if inconsistent.

    Free variables (rank deficiency) are set to 0.  Pivots need a decided
    NonZero verdict; an Unknown entry that would be needed as pivot raises.
    """
    m = [list(r) + [b] for r, b in zip(rows, rhs)]
    ncols = len(rows[0]) if rows else 0
    pivots = []
    r = 0
    for col in range(ncols):
        piv = None
        pending = None
        for k in range(r, len(m)):
            c = m[k][col]
            if c.is_structural_zero():
                continue
            v = is_zero(c)
            if v.is_nonzero:
                piv = k
                break
            if v.is_unknown:
                pending = c
        if piv is None:
            if pending is not None:
                raise UndecidableError(f"undecidable pivot {pending}", pending)
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][col]
        m[r] = [x * inv for x in m[r]]
        for k in range(len(m)):
            if k != r and not m[k][col].is_structural_zero():
                f = m[k][col]
                m[k] = [a - f * b for a, b in zip(m[k], m[r])]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    for k in range(r, len(m)):
        if _nonzero(m[k][-1], "consistency residual"):
            return None
    x = [const(0)] * ncols
    for k, col in enumerate(pivots):
        x[col] = m[k][-1]
    return x


def solve_poly_logderiv(f) -> Poly | None:
    """Monic polynomial H with H'/H = f, or None when no such H exists.

    The candidate degree is the residue of f at infinity; the coefficients
    come from the linear system ``H' * den(f) = num(f) * H``.  No
    factorization or root finding is involved.
    """
    f = ratfun(f)
    if f.is_zero():
        return Poly([1])
    dn, dd = f.num.degree, f.den.degree
    if dn != dd - 1:
        return None
    n_c = f.num.lc / f.den.lc
    n = as_fraction(n_c)
    if n is None or n.denominator != 1 or n <= 0:
        return None
    n = int(n)
    num, den = f.num, f.den
    # residual(H) = H' den - num H, linear in H's coefficients; h_n = 1.
    size = n + dd
    cols = []
    for j in range(n + 1):
        e = Poly([0] * j + [1])
        res = e.derivative() * den - num * e
        cols.append([res[k] for k in range(size)])
    rows = [[cols[j][k] for j in range(n)] for k in range(size)]
    rhs = [-cols[n][k] for k in range(size)]
    sol = solve_linear(rows, rhs) if n > 0 else []
    if sol is None:
        return None
    H = Poly(list(sol) + [1])
    if not (H.derivative() * den - num * H).is_zero():
        return None
    return H
