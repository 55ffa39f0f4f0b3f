"""Exponential polynomials sum_j H_j(z) exp(d_j z) and their quotients.

Coefficients are rational functions; the frequencies ``d_j`` are exact
constants.  Terms with distinct frequencies are linearly independent over
the rational functions (Borel), so an exponential polynomial vanishes
identically exactly when its frequency map is empty after pruning.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

import numpy as np

from .constfield import (
    NONZERO_VERDICT,
    ZERO_VERDICT,
    ConstExpr,
    ZeroVerdict,
    cexp,
    const,
    is_zero,
)
from .errors import ConstZeroDivisionError, UndecidableError
from .ratfun import Poly, RatFun, _top_level_sum, ratfun


@lru_cache(maxsize=65536)
def _distinct(d1: ConstExpr, d2: ConstExpr) -> bool:
    v = is_zero(d1 - d2)
    if v.is_unknown:
        raise UndecidableError(
            f"undecidable frequency: cannot decide whether {d1} and {d2} differ", d1 - d2, v.bits
        )
    return v.is_nonzero


def _freq_key(d: ConstExpr):
    return d.nf.key


class ExpoPoly:
    """Finite map frequency -> rational coefficient, kept in canonical order."""

    __slots__ = ("terms",)

    def __init__(self, terms: Iterable = ()):
        merged: dict[ConstExpr, RatFun] = {}
        for d, h in terms:
            d = const(d)
            h = ratfun(h)
            if d in merged:
                merged[d] = merged[d] + h
            else:
                merged[d] = h
        kept = [(d, h) for d, h in merged.items() if not h.is_zero()]
        for j in range(len(kept)):
            for k in range(j + 1, len(kept)):
                _distinct(kept[j][0], kept[k][0])
        kept.sort(key=lambda t: _freq_key(t[0]))
        self.terms: tuple[tuple[ConstExpr, RatFun], ...] = tuple(kept)

    @classmethod
    def _trusted(cls, terms) -> "ExpoPoly":
        p = cls.__new__(cls)
        p.terms = tuple(sorted(terms, key=lambda t: _freq_key(t[0])))
        return p

    @classmethod
    def term(cls, h, d=0) -> "ExpoPoly":
        """The single term ``h(z) * exp(d z)``."""
        return cls([(d, h)])

    @classmethod
    def exp(cls, d) -> "ExpoPoly":
        return cls([(d, 1)])

    # -- structure ---------------------------------------------------------
    @property
    def frequencies(self) -> tuple[ConstExpr, ...]:
        return tuple(d for d, _ in self.terms)

    def coefficient(self, d) -> RatFun:
        d = const(d)
        for dd, h in self.terms:
            if dd == d:
                return h
        return RatFun(0)

    def is_entire(self) -> bool:
        return all(h.is_polynomial() for _, h in self.terms)

    def is_transcendental(self) -> bool:
        return any(not d.is_structural_zero() for d, _ in self.terms)

    def is_identically_zero(self) -> bool:
        return not self.terms

    def __len__(self):
        return len(self.terms)

    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    # -- arithmetic --------------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return ExpoPoly(self.terms + other.terms)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return ExpoPoly(self.terms + tuple((d, -h) for d, h in other.terms))

    def __rsub__(self, other):
        return _coerce(other) - self

    def __neg__(self):
        return ExpoPoly._trusted([(d, -h) for d, h in self.terms])

    def __mul__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        out = []
        for d1, h1 in self.terms:
            for d2, h2 in other.terms:
                out.append((d1 + d2, h1 * h2))
        return ExpoPoly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative powers leave the exponential polynomials")
        out = ExpoPoly([(0, 1)])
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        return ExpoRational(self, other)

    # -- operators -----------------------------------------------------------
    def shift(self, c) -> "ExpoPoly":
        """f(z + c): each term picks up exp(d c) and a shifted coefficient."""
        c = const(c)
        return ExpoPoly((d, h.shift(c) * cexp(d * c)) for d, h in self.terms)

    def derivative(self) -> "ExpoPoly":
        return ExpoPoly((d, h.derivative() + h * d) for d, h in self.terms)

    def is_zero(self) -> ZeroVerdict:
        return ZERO_VERDICT if not self.terms else NONZERO_VERDICT

    # -- numerics ------------------------------------------------------------
    def numeric_terms(self):
        """[(complex d, num coeffs, den coeffs)] with ascending coefficient order."""
        return [
            (complex(d), h.num.numeric_coeffs(), h.den.numeric_coeffs()) for d, h in self.terms
        ]

    def evaluate(self, z):
        """Floating value at ``z`` (scalar or ndarray)."""
        z = np.asarray(z, dtype=complex)
        out = np.zeros_like(z)
        for d, num, den in self.numeric_terms():
            dv = np.polyval(den[::-1], z)
            if np.any(dv == 0):
                raise ConstZeroDivisionError("evaluation at a pole of a coefficient")
            out = out + np.polyval(num[::-1], z) / dv * np.exp(d * z)
        return out if out.ndim else complex(out)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for d, h in self.terms:
            hs = str(h)
            if d.is_structural_zero():
                parts.append(hs)
                continue
            ds = str(d)
            if ds == "1":
                e = "exp(z)"
            elif ds == "-1":
                e = "exp(-z)"
            else:
                e = f"exp(({ds})*z)" if any(ch in ds for ch in "+-/ ") else f"exp({ds}*z)"
            if hs == "1":
                parts.append(e)
            elif hs == "-1":
                parts.append(f"-{e}")
            elif _top_level_sum(hs):
                parts.append(f"({hs})*{e}")
            else:
                parts.append(f"{hs}*{e}")
        out = parts[0]
        for part in parts[1:]:
            out += f" - {part[1:]}" if part.startswith("-") else f" + {part}"
        return out

    def __repr__(self):
        return f"ExpoPoly({self})"


def _coerce(x) -> ExpoPoly | None:
    if isinstance(x, ExpoPoly):
        return x
    if isinstance(x, (RatFun, Poly, ConstExpr, int)) and not isinstance(x, bool):
        return ExpoPoly([(0, ratfun(x))])
    from fractions import Fraction

    if isinstance(x, Fraction):
        return ExpoPoly([(0, ratfun(x))])
    return None


def expoly(x) -> ExpoPoly:
    p = _coerce(x)
    if p is None:
        raise TypeError(f"cannot make an exponential polynomial from {type(x).__name__}")
    return p


class ExpoRational:
    """num/den of exponential polynomials; never auto-reduced."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=1):
        num, den = expoly(num), expoly(den)
        if den.is_identically_zero():
            raise ConstZeroDivisionError("exponential rational with identically zero denominator")
        self.num = num
        self.den = den

    def __add__(self, other):
        other = _as_rational(other)
        return ExpoRational(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        other = _as_rational(other)
        return ExpoRational(self.num * other.den - other.num * self.den, self.den * other.den)

    def __rsub__(self, other):
        return _as_rational(other) - self

    def __neg__(self):
        return ExpoRational(-self.num, self.den)

    def __mul__(self, other):
        other = _as_rational(other)
        return ExpoRational(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_rational(other)
        if other.num.is_identically_zero():
            raise ConstZeroDivisionError("division by an identically zero exponential rational")
        return ExpoRational(self.num * other.den, self.den * other.num)

    def cleared(self) -> ExpoPoly:
        """The single numerator whose vanishing decides ``self == 0``."""
        return self.num

    def is_zero(self) -> ZeroVerdict:
        return self.num.is_zero()

    def evaluate(self, z):
        return self.num.evaluate(z) / self.den.evaluate(z)

    def __str__(self):
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"ExpoRational({self})"


def _as_rational(x) -> ExpoRational:
    if isinstance(x, ExpoRational):
        return x
    return ExpoRational(expoly(x))


# functional aliases mirroring the operation names


def epx_arith(f, g, op: str) -> ExpoPoly:
    f, g = expoly(f), expoly(g)
    if op == "+":
        return f + g
    if op in ("-", "−"):
        return f - g
    if op in ("*", "×"):
        return f * g
    raise ValueError(f"unknown operator {op!r}")


def epx_shift(f, c) -> ExpoPoly:
    return expoly(f).shift(c)


def epx_derivative(f) -> ExpoPoly:
    return expoly(f).derivative()


def epx_is_zero(f) -> ZeroVerdict:
    return expoly(f).is_zero()


def epx_eval(f, z0):
    return expoly(f).evaluate(z0)
