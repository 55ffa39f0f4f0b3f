"""Exact symbolic constants over Q(i) adjoined with pi and exponentials.

A :class:`ConstExpr` is either a raw expression tree (rationals, ``i``,
``pi``, ``+ - * /``, integer powers, ``exp``) or a *normal form*.  Normal
forms are quotients of Laurent polynomials whose monomials are

    coeff * pi**n * exp(sum_k q_k * b_k)

with ``coeff`` a Gaussian rational, ``q_k`` rationals and ``b_k`` basis
elements extracted from the exponent.  Multiples of ``pi*i`` inside an
exponent are folded into powers of ``i`` so that exponents keep their
``pi*i`` part in ``[0, 1/2)``.

Generators (pi, distinct exponential atoms) are treated as algebraically
independent once roots of unity have been extracted.  This is a Schanuel
style heuristic; it can only make ``is_zero`` answer Unknown, never give a
wrong certified verdict, because NonZero always comes from interval
evaluation and Zero only from the literal normal form 0.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

import mpmath
from mpmath.ctx_iv import MPIntervalContext
from sympy.polys.domains import QQ_I
from sympy.polys.rings import PolyRing

from .errors import ConstZeroDivisionError, IntervalPrecisionError

DEFAULT_MAX_BITS = 1024
DEFAULT_MAX_EXP_DEPTH = 2

_ZQ = QQ_I(0, 0)
_ONEQ = QQ_I(1, 0)
_IQ = QQ_I(0, 1)
_I_POWERS = (QQ_I(1, 0), QQ_I(0, 1), QQ_I(-1, 0), QQ_I(0, -1))

ONE_MONO = (0, ())
PI_MONO = (1, ())
# basis key of pi*i, the only one subject to root-of-unity folding
_PI_I = ("i", PI_MONO, ())


def _frac(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def _gq(x) -> object:
    if isinstance(x, Fraction):
        return QQ_I(x.numerator, 0) / QQ_I(x.denominator, 0)
    return QQ_I(x, 0)


# ---------------------------------------------------------------------------
# monomials and Laurent polynomials
# ---------------------------------------------------------------------------


def _make_mono(pi_pow: int, vec: dict):
    """Build a canonical monomial; returns (coefficient factor, mono)."""
    coeff = _ONEQ
    q = vec.get(_PI_I)
    if q is not None:
        k = math.floor(2 * q)
        rest = q - Fraction(k, 2)
        coeff = _I_POWERS[k % 4]
        if rest:
            vec[_PI_I] = rest
        else:
            del vec[_PI_I]
    items = tuple(sorted((k, v) for k, v in vec.items() if v))
    return coeff, (pi_pow, items)


def _mono_mul(m1, m2):
    if not m1[1] and not m2[1]:
        return _ONEQ, (m1[0] + m2[0], ())
    vec = dict(m1[1])
    for k, v in m2[1]:
        vec[k] = vec.get(k, 0) + v
    return _make_mono(m1[0] + m2[0], vec)


def _mono_inv(m):
    return _make_mono(-m[0], {k: -v for k, v in m[1]})


def _lp_add(a: dict, b: dict, sign=1) -> dict:
    out = dict(a)
    for m, c in b.items():
        v = out.get(m, _ZQ) + (c if sign == 1 else -c)
        if v:
            out[m] = v
        else:
            out.pop(m, None)
    return out


def _lp_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            f, m = _mono_mul(m1, m2)
            v = out.get(m, _ZQ) + c1 * c2 * f
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


def _lp_term_mul(a: dict, c, mono) -> dict:
    out = {}
    for m, cm in a.items():
        f, mm = _mono_mul(m, mono)
        out[mm] = out.get(mm, _ZQ) + cm * c * f
    return {m: v for m, v in out.items() if v}


def _lp_key(a: dict) -> tuple:
    return tuple(sorted((m, _frac(c.x), _frac(c.y)) for m, c in a.items()))


def _lp_from_key(key: tuple) -> dict:
    return {m: _gq(x) + _gq(y) * _IQ for m, x, y in key}


_ONE_LP = {ONE_MONO: _ONEQ}


def _is_one(a: dict) -> bool:
    return len(a) == 1 and a.get(ONE_MONO) == _ONEQ


# ---------------------------------------------------------------------------
# gcd cancellation through sympy's sparse polynomial rings
# ---------------------------------------------------------------------------

_RINGS: dict[int, PolyRing] = {}
_RINGS_LOCK = threading.Lock()


def _ring(n: int) -> PolyRing:
    with _RINGS_LOCK:
        r = _RINGS.get(n)
        if r is None:
            r = PolyRing(",".join(f"x{k}" for k in range(n)), QQ_I)
            _RINGS[n] = r
        return r


def _cancel(num: dict, den: dict):
    monos = list(num) + list(den)
    keys = sorted({k for m in monos for k, _ in m[1]})
    scale = {}
    for k in keys:
        dens = [v.denominator for m in monos for kk, v in m[1] if kk == k]
        scale[k] = reduce(math.lcm, dens, 1)
    pi_min = min(m[0] for m in monos)
    lows = {}
    for k in keys:
        lows[k] = min(int(dict(m[1]).get(k, 0) * scale[k]) for m in monos)

    def to_tuple(m):
        d = dict(m[1])
        return (m[0] - pi_min,) + tuple(int(d.get(k, 0) * scale[k]) - lows[k] for k in keys)

    ring = _ring(1 + len(keys))
    p = ring.from_dict({to_tuple(m): c for m, c in num.items()})
    q = ring.from_dict({to_tuple(m): c for m, c in den.items()})
    g = p.gcd(q)
    if g.is_ground:
        return num, den
    p, q = p.exquo(g), q.exquo(g)

    def back(poly):
        out: dict = {}
        for exps, c in poly.items():
            vec = {}
            for k, e in zip(keys, exps[1:]):
                v = Fraction(e + lows[k], scale[k])
                if v:
                    vec[k] = v
            f, m = _make_mono(exps[0] + pi_min, vec)
            out[m] = out.get(m, _ZQ) + c * f
        return {m: v for m, v in out.items() if v}

    return back(p), back(q)


# ---------------------------------------------------------------------------
# normal forms
# ---------------------------------------------------------------------------


class _NF:
    __slots__ = ("num", "den", "key", "_hash")

    def __init__(self, num: dict, den: dict):
        self.num = num
        self.den = den
        self.key = (_lp_key(num), () if _is_one(den) else _lp_key(den))
        self._hash = hash(self.key)


def _reduce(num: dict, den: dict) -> _NF:
    if not num:
        return _NF({}, dict(_ONE_LP))
    if not den:
        raise ConstZeroDivisionError("division by a constant that normalizes to 0")
    if len(den) > 1:
        num, den = _cancel(num, den)
    # make the leading denominator term 1 (the monomials are units)
    lead_m = max(den)
    lead_c = den[lead_m]
    f, inv = _mono_inv(lead_m)
    scale = f / lead_c
    num = _lp_term_mul(num, scale, inv)
    den = _lp_term_mul(den, scale, inv)
    return _NF(num, den)


def _nf_const(c) -> _NF:
    return _NF({ONE_MONO: c}, dict(_ONE_LP)) if c else _NF({}, dict(_ONE_LP))


def _nf_add(a: _NF, b: _NF, sign=1) -> _NF:
    if _is_one(a.den) and _is_one(b.den):
        return _NF(_lp_add(a.num, b.num, sign), dict(_ONE_LP))
    num = _lp_add(_lp_mul(a.num, b.den), _lp_mul(b.num, a.den), sign)
    return _reduce(num, _lp_mul(a.den, b.den))


def _nf_mul(a: _NF, b: _NF) -> _NF:
    if _is_one(a.den) and _is_one(b.den):
        return _NF(_lp_mul(a.num, b.num), dict(_ONE_LP))
    return _reduce(_lp_mul(a.num, b.num), _lp_mul(a.den, b.den))


def _nf_div(a: _NF, b: _NF) -> _NF:
    if not b.num:
        raise ConstZeroDivisionError("division by a constant that normalizes to 0")
    return _reduce(_lp_mul(a.num, b.den), _lp_mul(a.den, b.num))


def _nf_pow(a: _NF, n: int) -> _NF:
    if n < 0:
        a = _nf_div(_nf_const(_ONEQ), a)
        n = -n
    out = _nf_const(_ONEQ)
    base = a
    while n:
        if n & 1:
            out = _nf_mul(out, base)
        n >>= 1
        if n:
            base = _nf_mul(base, base)
    return out


def _lp_depth(p: dict) -> int:
    return max((_mono_depth(m) for m in p), default=0)


def _mono_depth(m) -> int:
    d = 0
    for (part, km, kden), _ in m[1]:
        inner = max(_mono_depth(km), _lp_depth(_lp_from_key(kden)) if kden else 0)
        d = max(d, 1 + inner)
    return d


def _nf_exp(a: _NF, max_depth: int) -> _NF:
    depth = 1 + max(_lp_depth(a.num), _lp_depth(a.den))
    if depth > max_depth:
        raise ValueError(f"exp nesting depth {depth} exceeds the configured maximum {max_depth}")
    dkey = () if _is_one(a.den) else _lp_key(a.den)
    vec: dict = {}
    for m, c in a.num.items():
        x, y = _frac(c.x), _frac(c.y)
        if x:
            k = ("r", m, dkey)
            vec[k] = vec.get(k, 0) + x
        if y:
            k = ("i", m, dkey)
            vec[k] = vec.get(k, 0) + y
    f, mono = _make_mono(0, vec)
    return _NF({mono: f}, dict(_ONE_LP))


def _exponent_nf(vec) -> _NF:
    """Rebuild the exponent of ``exp(sum q_k b_k)`` as a normal form."""
    total = _nf_const(_ZQ)
    for (part, km, kden), q in vec:
        c = _gq(q) * (_IQ if part == "i" else _ONEQ)
        term = _NF({km: c}, dict(_ONE_LP))
        if kden:
            term = _nf_div(term, _NF(_lp_from_key(kden), dict(_ONE_LP)))
        total = _nf_add(total, term)
    return total


# ---------------------------------------------------------------------------
# printing
# ---------------------------------------------------------------------------


def _fmt_frac(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _fmt_mono_factors(m) -> list[str]:
    out = []
    if m[0] == 1:
        out.append("pi")
    elif m[0] > 1:
        out.append(f"pi^{m[0]}")
    elif m[0] < 0:
        out.append(f"pi^({m[0]})")
    if m[1]:
        out.append(f"exp({_fmt_nf(_exponent_nf(m[1]))})")
    return out


def _fmt_term(m, c, first: bool) -> str:
    x, y = _frac(c.x), _frac(c.y)
    factors = _fmt_mono_factors(m)
    sign = ""
    if y == 0:
        if x < 0:
            sign, x = "-", -x
        coef = "" if (x == 1 and factors) else _fmt_frac(x)
    elif x == 0:
        if y < 0:
            sign, y = "-", -y
        coef = "i" if y == 1 else f"{_fmt_frac(y)}*i"
    else:
        ys = "+" if y > 0 else "-"
        yy = abs(y)
        coef = f"({_fmt_frac(x)} {ys} {'i' if yy == 1 else _fmt_frac(yy) + '*i'})"
    body = "*".join(([coef] if coef else []) + factors)
    if first:
        return ("-" if sign else "") + body
    return (" - " if sign else " + ") + body


def _fmt_lp(p: dict) -> str:
    if not p:
        return "0"
    return "".join(_fmt_term(m, p[m], i == 0) for i, m in enumerate(sorted(p)))


def _fmt_nf(a: _NF) -> str:
    if _is_one(a.den):
        return _fmt_lp(a.num)
    return f"({_fmt_lp(a.num)})/({_fmt_lp(a.den)})"


# ---------------------------------------------------------------------------
# complex interval arithmetic
# ---------------------------------------------------------------------------

_CTX = threading.local()


def _ctx(bits: int) -> MPIntervalContext:
    cache = getattr(_CTX, "cache", None)
    if cache is None:
        cache = _CTX.cache = {}
    ctx = cache.get(bits)
    if ctx is None:
        ctx = MPIntervalContext()
        ctx.prec = bits
        cache[bits] = ctx
    return ctx


class CInterval:
    """Axis-aligned rectangle in C with mpmath interval endpoints."""

    __slots__ = ("re", "im", "ctx", "bits")

    def __init__(self, re, im, ctx, bits):
        self.re, self.im, self.ctx, self.bits = re, im, ctx, bits

    def _wrap(self, re, im):
        return CInterval(re, im, self.ctx, self.bits)

    def __add__(self, o):
        return self._wrap(self.re + o.re, self.im + o.im)

    def __sub__(self, o):
        return self._wrap(self.re - o.re, self.im - o.im)

    def __neg__(self):
        return self._wrap(-self.re, -self.im)

    def __mul__(self, o):
        return self._wrap(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def __truediv__(self, o):
        n2 = o.re * o.re + o.im * o.im
        if n2.a <= 0:
            raise IntervalPrecisionError("divisor interval contains 0", self.bits)
        return self._wrap(
            (self.re * o.re + self.im * o.im) / n2, (self.im * o.re - self.re * o.im) / n2
        )

    def __pow__(self, n: int):
        if n < 0:
            return self._wrap(self.ctx.mpf(1), self.ctx.mpf(0)) / (self ** (-n))
        out = self._wrap(self.ctx.mpf(1), self.ctx.mpf(0))
        for _ in range(n):
            out = out * self
        return out

    def exp(self):
        r = self.ctx.exp(self.re)
        return self._wrap(r * self.ctx.cos(self.im), r * self.ctx.sin(self.im))

    def excludes_zero(self) -> bool:
        return not (0 in self.re and 0 in self.im)

    def contains(self, z: complex) -> bool:
        return z.real in self.re and z.imag in self.im

    def intersects(self, o: "CInterval") -> bool:
        return not (
            self.re.b < o.re.a or o.re.b < self.re.a or self.im.b < o.im.a or o.im.b < self.im.a
        )

    @property
    def width(self) -> float:
        return float(max(self.re.delta, self.im.delta).b)

    @property
    def mid(self) -> complex:
        return complex(float(self.re.mid), float(self.im.mid))

    def mid_mp(self):
        """Midpoint as an mpmath mpc at the interval's precision."""
        with mpmath.workprec(self.bits):
            return mpmath.mpc(self.re.mid.a, self.im.mid.a)

    def __repr__(self):
        return f"CInterval({self.re}, {self.im})"


def _iv_rat(ctx, bits, q) -> CInterval:
    x, y = _frac(q.x), _frac(q.y)
    re = ctx.mpf(x.numerator) / x.denominator if x else ctx.mpf(0)
    im = ctx.mpf(y.numerator) / y.denominator if y else ctx.mpf(0)
    return CInterval(re, im, ctx, bits)


def _iv_lp(p: dict, ctx, bits, memo) -> CInterval:
    total = CInterval(ctx.mpf(0), ctx.mpf(0), ctx, bits)
    for m, c in p.items():
        total = total + _iv_rat(ctx, bits, c) * _iv_mono(m, ctx, bits, memo)
    return total


def _iv_mono(m, ctx, bits, memo) -> CInterval:
    hit = memo.get(m)
    if hit is not None:
        return hit
    val = CInterval(ctx.mpf(1), ctx.mpf(0), ctx, bits)
    if m[0]:
        val = CInterval(ctx.pi, ctx.mpf(0), ctx, bits) ** m[0]
    if m[1]:
        expo = CInterval(ctx.mpf(0), ctx.mpf(0), ctx, bits)
        for (part, km, kden), q in m[1]:
            b = _iv_mono(km, ctx, bits, memo)
            if part == "i":
                b = b * CInterval(ctx.mpf(0), ctx.mpf(1), ctx, bits)
            if kden:
                b = b / _iv_lp(_lp_from_key(kden), ctx, bits, memo)
            qi = ctx.mpf(q.numerator) / q.denominator
            expo = expo + CInterval(b.re * qi, b.im * qi, ctx, bits)
        val = val * expo.exp()
    memo[m] = val
    return val


def _iv_nf(a: _NF, ctx, bits) -> CInterval:
    memo: dict = {}
    num = _iv_lp(a.num, ctx, bits, memo)
    if _is_one(a.den):
        return num
    return num / _iv_lp(a.den, ctx, bits, memo)


# ---------------------------------------------------------------------------
# public API
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ZeroVerdict:
    """Outcome of :func:`is_zero`: ``zero``, ``nonzero`` or ``unknown``."""

    kind: str
    bits: int | None = None

    @property
    def is_zero(self) -> bool:
        return self.kind == "zero"

    @property
    def is_nonzero(self) -> bool:
        return self.kind == "nonzero"

    @property
    def is_unknown(self) -> bool:
        return self.kind == "unknown"

    def __str__(self):
        if self.kind == "unknown":
            return f"Unknown({self.bits} bits)"
        return "Zero" if self.kind == "zero" else "NonZero"


ZERO_VERDICT = ZeroVerdict("zero")
NONZERO_VERDICT = ZeroVerdict("nonzero")


def unknown(bits: int) -> ZeroVerdict:
    return ZeroVerdict("unknown", bits)


_OPS = {"rat", "i", "pi", "add", "sub", "mul", "div", "neg", "pow", "exp", "nf"}


class ConstExpr:
    """An exact constant; either a raw expression tree or a normal form.

    Arithmetic operators always return normal forms.  Raw trees are built
    with :func:`raw` (the parser does this when asked to keep structure).
    Equality and hashing compare normal forms.
    """

    __slots__ = ("op", "args", "_nf", "_verdict", "_complex")

    def __init__(self, op: str, args: tuple = (), nf: _NF | None = None):
        if op not in _OPS:
            raise ValueError(f"unknown constant operator {op!r}")
        self.op = op
        self.args = args
        self._nf = nf
        self._verdict = None
        self._complex = None

    # -- construction helpers -------------------------------------------
    @staticmethod
    def _from_nf(nf: _NF) -> "ConstExpr":
        return ConstExpr("nf", (), nf)

    @property
    def nf(self) -> _NF:
        if self._nf is None:
            self._nf = _to_nf(self, DEFAULT_MAX_EXP_DEPTH)
        return self._nf

    @property
    def is_normal(self) -> bool:
        return self.op == "nf"

    # -- arithmetic ----------------------------------------------------------
    def __add__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return ConstExpr._from_nf(_nf_add(self.nf, other.nf))

    __radd__ = __add__

    def __sub__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return ConstExpr._from_nf(_nf_add(self.nf, other.nf, -1))

    def __rsub__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return other - self

    def __mul__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return ConstExpr._from_nf(_nf_mul(self.nf, other.nf))

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return ConstExpr._from_nf(_nf_div(self.nf, other.nf))

    def __rtruediv__(self, other):
        other = _maybe_const(other)
        if other is None:
            return NotImplemented
        return other / self

    def __neg__(self):
        return ConstExpr._from_nf(_nf_add(_nf_const(_ZQ), self.nf, -1))

    def __pos__(self):
        return normalize(self)

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("only integer powers of constants are supported")
        return ConstExpr._from_nf(_nf_pow(self.nf, n))

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = const(other)
        if not isinstance(other, ConstExpr):
            return NotImplemented
        return self.nf.key == other.nf.key

    def __hash__(self):
        return self.nf._hash

    def is_structural_zero(self) -> bool:
        return not self.nf.num

    def __complex__(self):
        if self._complex is None:
            self._complex = eval_interval(self, 64).mid
        return self._complex

    def __str__(self):
        if self.op == "nf":
            return _fmt_nf(self._nf)
        return _fmt_raw(self)

    def __repr__(self):
        tag = "" if self.op == "nf" else "raw "
        return f"ConstExpr({tag}{self})"


def _fmt_raw(c: ConstExpr) -> str:
    op, a = c.op, c.args
    if op == "rat":
        return _fmt_frac(a[0])
    if op in ("i", "pi"):
        return op
    if op == "neg":
        return f"(-{_fmt_raw(a[0])})"
    if op == "exp":
        return f"exp({_fmt_raw(a[0])})"
    if op == "pow":
        return f"({_fmt_raw(a[0])})^({a[1]})"
    if op == "nf":
        return f"({_fmt_nf(c.nf)})"
    sym = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[op]
    return f"({_fmt_raw(a[0])} {sym} {_fmt_raw(a[1])})"


def _to_nf(c: ConstExpr, max_depth: int) -> _NF:
    op, a = c.op, c.args
    if op == "nf":
        return c._nf
    if op == "rat":
        return _nf_const(_gq(a[0]))
    if op == "i":
        return _nf_const(_IQ)
    if op == "pi":
        return _NF({PI_MONO: _ONEQ}, dict(_ONE_LP))
    if op == "neg":
        return _nf_add(_nf_const(_ZQ), _to_nf(a[0], max_depth), -1)
    if op == "pow":
        return _nf_pow(_to_nf(a[0], max_depth), a[1])
    if op == "exp":
        return _nf_exp(_to_nf(a[0], max_depth), max_depth)
    x, y = _to_nf(a[0], max_depth), _to_nf(a[1], max_depth)
    if op == "add":
        return _nf_add(x, y)
    if op == "sub":
        return _nf_add(x, y, -1)
    if op == "mul":
        return _nf_mul(x, y)
    return _nf_div(x, y)


def raw(op: str, *args) -> ConstExpr:
    """Build an unnormalized expression node.

    ``raw("rat", Fraction(1, 2))``, ``raw("add", x, y)``, ``raw("pow", x, 3)``.
    """
    if op == "rat":
        return ConstExpr("rat", (Fraction(args[0]),))
    if op == "pow":
        return ConstExpr("pow", (args[0], int(args[1])))
    return ConstExpr(op, tuple(args))


def const(x) -> ConstExpr:
    """Coerce an int, Fraction or ConstExpr into a normalized ConstExpr."""
    if isinstance(x, ConstExpr):
        return x if x.op == "nf" else normalize(x)
    if isinstance(x, bool):
        raise TypeError("bool is not a constant")
    if isinstance(x, (int, Fraction)):
        return ConstExpr._from_nf(_nf_const(_gq(Fraction(x))))
    raise TypeError(f"cannot make an exact constant from {type(x).__name__}")


def _maybe_const(x) -> ConstExpr | None:
    if isinstance(x, ConstExpr) or (isinstance(x, (int, Fraction)) and not isinstance(x, bool)):
        return const(x)
    return None


def normalize(c: ConstExpr, max_exp_depth: int = DEFAULT_MAX_EXP_DEPTH) -> ConstExpr:
    """Return the canonical normal form of ``c``.

    Folds rational arithmetic, collects like exponential atoms, applies
    ``exp(a)exp(b) = exp(a+b)`` and ``exp(k pi i/2) = i**k``.
    """
    if c.op == "nf":
        return c
    return ConstExpr._from_nf(_to_nf(c, max_exp_depth))


def cexp(c) -> ConstExpr:
    """exp of a constant, normalized."""
    return ConstExpr._from_nf(_nf_exp(const(c).nf, DEFAULT_MAX_EXP_DEPTH))


def eval_interval(c: ConstExpr, bits: int = 64) -> CInterval:
    """Rectangle guaranteed to contain the exact value of ``c``."""
    if bits < 16:
        raise ValueError("interval evaluation needs at least 16 bits")
    ctx = _ctx(bits)
    if c.op == "nf":
        return _iv_nf(c._nf, ctx, bits)
    return _iv_raw(c, ctx, bits)


def _iv_raw(c: ConstExpr, ctx, bits) -> CInterval:
    op, a = c.op, c.args
    if op == "nf":
        return _iv_nf(c._nf, ctx, bits)
    if op == "rat":
        return _iv_rat(ctx, bits, _gq(a[0]))
    if op == "i":
        return CInterval(ctx.mpf(0), ctx.mpf(1), ctx, bits)
    if op == "pi":
        return CInterval(ctx.pi, ctx.mpf(0), ctx, bits)
    if op == "neg":
        return -_iv_raw(a[0], ctx, bits)
    if op == "pow":
        return _iv_raw(a[0], ctx, bits) ** a[1]
    if op == "exp":
        return _iv_raw(a[0], ctx, bits).exp()
    x, y = _iv_raw(a[0], ctx, bits), _iv_raw(a[1], ctx, bits)
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    return x / y


_MAX_BITS: contextvars.ContextVar[int] = contextvars.ContextVar("max_bits", default=DEFAULT_MAX_BITS)


@contextlib.contextmanager
def precision(max_bits: int):
    """Cap the interval precision used by is_zero inside the block."""
    if max_bits < 64:
        raise ValueError("precision must be at least 64 bits")
    token = _MAX_BITS.set(max_bits)
    try:
        yield
    finally:
        _MAX_BITS.reset(token)


def is_zero(c: ConstExpr, max_bits: int | None = None) -> ZeroVerdict:
    """Tri-state zero test.

    Zero iff the normal form is literally 0; NonZero iff some interval
    evaluation with at most ``max_bits`` bits excludes 0; Unknown otherwise.
    """
    c = const(c)
    if max_bits is None:
        max_bits = _MAX_BITS.get()
    if c._verdict is not None:
        return c._verdict
    if not c.nf.num:
        c._verdict = ZERO_VERDICT
        return ZERO_VERDICT
    bits = 64
    reached = 0
    while bits <= max_bits:
        reached = bits
        try:
            if eval_interval(c, bits).excludes_zero():
                c._verdict = NONZERO_VERDICT
                return NONZERO_VERDICT
        except IntervalPrecisionError:
            pass
        bits *= 2
    return unknown(reached)


def as_fraction(c: ConstExpr) -> Fraction | None:
    """The value as a Fraction when ``c`` is a plain rational, else None."""
    nf = const(c).nf
    if not _is_one(nf.den):
        return None
    if not nf.num:
        return Fraction(0)
    if len(nf.num) != 1 or ONE_MONO not in nf.num:
        return None
    v = nf.num[ONE_MONO]
    if v.y:
        return None
    return _frac(v.x)


def as_gaussian(c: ConstExpr):
    """The value as a sympy Gaussian rational when ``c`` lies in Q(i), else None."""
    nf = const(c).nf
    if not _is_one(nf.den):
        return None
    if not nf.num:
        return _ZQ
    if len(nf.num) != 1 or ONE_MONO not in nf.num:
        return None
    return nf.num[ONE_MONO]


def from_gaussian(g) -> ConstExpr:
    return ConstExpr._from_nf(_nf_const(g))


def as_int(c: ConstExpr) -> int | None:
    q = as_fraction(c)
    if q is None or q.denominator != 1:
        return None
    return q.numerator


def _rat_sqrt(q: Fraction) -> Fraction | None:
    if q < 0:
        return None
    n, d = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


def _gauss_sqrt(c):
    x, y = _frac(c.x), _frac(c.y)
    n = _rat_sqrt(x * x + y * y)
    if n is None:
        return None
    a = _rat_sqrt((x + n) / 2)
    if a is None:
        return None
    if a == 0:
        b = _rat_sqrt(-x)
        if b is None:
            return None
        return QQ_I(0, 0) + _gq(b) * _IQ
    b = y / (2 * a)
    return _gq(a) + _gq(b) * _IQ


def sqrt_exact(c: ConstExpr) -> ConstExpr | None:
    """A square root of ``c`` inside the constant field, or None.

    Only single-monomial constants are handled: Gaussian-rational
    coefficient, even power of pi, and any exponential part (halved).
    """
    nf = const(c).nf
    if not nf.num:
        return const(0)
    if not _is_one(nf.den) or len(nf.num) != 1:
        return None
    (m, coeff), = nf.num.items()
    if m[0] % 2:
        return None
    root = _gauss_sqrt(coeff)
    if root is None:
        return None
    f, mono = _make_mono(m[0] // 2, {k: v / 2 for k, v in m[1]})
    out = ConstExpr._from_nf(_NF({mono: root * f}, dict(_ONE_LP)))
    if out * out != const(c):
        # halving a folded pi*i exponent can land on the other root; fix the sign class
        return None
    return out


def exp_depth(c: ConstExpr) -> int:
    nf = const(c).nf
    return max(_lp_depth(nf.num), _lp_depth(nf.den))


ZERO = const(0)
ONE = const(1)
I = ConstExpr._from_nf(_nf_const(_IQ))
PI = ConstExpr._from_nf(_NF({PI_MONO: _ONEQ}, dict(_ONE_LP)))
E = cexp(1)
