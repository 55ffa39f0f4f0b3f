"""Pratt parser for constants, rational functions, exponential polynomials and equations.

A script is a sequence of definitions ``name := expr`` separated by ``;``
or newlines.  Names may be used after they are defined.  The reserved
names are ``z``, ``w``, ``i``, ``pi`` and ``exp``.

Every expression evaluates eagerly into the smallest class that holds it:
a constant, a rational function of ``z``, an exponential polynomial, or a
rational function of ``w`` with rational-function coefficients.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from ..constfield import I, PI, ConstExpr, as_int, cexp, const, is_zero
from ..ddeq import WPoly, WRational
from ..errors import ConstZeroDivisionError, MalmquistError
from ..expoly import ExpoPoly
from ..ratfun import RatFun, ratfun

RESERVED = {"z", "w", "i", "pi", "exp"}


@dataclass(frozen=True)
class Span:
    line: int
    col: int
    end_col: int

    def __str__(self):
        return f"line {self.line}, column {self.col}"


class ParseError(MalmquistError):
    def __init__(self, message: str, span: Span | None = None):
        where = f" at {span}" if span else ""
        super().__init__(f"{message}{where}")
        self.reason = message
        self.span = span


@dataclass(frozen=True)
class Token:
    kind: str  # num, name, op, end
    text: str
    span: Span


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(:=|\*\*|[-+*/^();,]|−|×)|(\S))")


def tokenize(text: str) -> list[Token]:
    out: list[Token] = []
    for lineno, line in enumerate(text.splitlines() or [""], start=1):
        pos = 0
        stripped = line.split("#", 1)[0]
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if m is None or m.end() == pos:
                break
            num, name, op, bad = m.groups()
            start = m.start(m.lastindex) + 1
            span = Span(lineno, start, m.end() + 1)
            if bad is not None:
                raise ParseError(f"unexpected character {bad!r}", span)
            if num is not None:
                out.append(Token("num", num, span))
            elif name is not None:
                out.append(Token("name", name, span))
            else:
                op = {"−": "-", "×": "*", "**": "^"}.get(op, op)
                out.append(Token("op", op, span))
            pos = m.end()
        out.append(Token("op", "\n", Span(lineno, len(stripped) + 1, len(stripped) + 1)))
    last = out[-1].span if out else Span(1, 1, 1)
    out.append(Token("end", "", last))
    return out


# -- value algebra -------------------------------------------------------------------


class WFrac:
    """P/Q with P, Q polynomials in w; normalized only when handed out."""

    __slots__ = ("P", "Q")

    def __init__(self, P: WPoly, Q: WPoly):
        self.P = P
        self.Q = Q

    def rational(self) -> WRational:
        return WRational(self.P, self.Q)


def _lift_w(x) -> WFrac:
    if isinstance(x, WFrac):
        return x
    return WFrac(WPoly([ratfun(x)]), WPoly([1]))


def _rank(x) -> int:
    if isinstance(x, ConstExpr):
        return 0
    if isinstance(x, RatFun):
        return 1
    if isinstance(x, ExpoPoly):
        return 2
    return 3


def _binary(op: str, x, y, span: Span):
    rx, ry = _rank(x), _rank(y)
    if {rx, ry} == {2, 3}:
        raise ParseError("cannot mix w with explicit exponentials", span)
    try:
        if max(rx, ry) == 3:
            a, b = _lift_w(x), _lift_w(y)
            if op == "+":
                return WFrac(a.P * b.Q + b.P * a.Q, a.Q * b.Q)
            if op == "-":
                return WFrac(a.P * b.Q - b.P * a.Q, a.Q * b.Q)
            if op == "*":
                return WFrac(a.P * b.P, a.Q * b.Q)
            if b.P.is_zero():
                raise ParseError("zero denominator", span)
            return WFrac(a.P * b.Q, a.Q * b.P)
        if max(rx, ry) == 2:
            a = x if isinstance(x, ExpoPoly) else ExpoPoly.term(x)
            if op == "/":
                if isinstance(y, ExpoPoly):
                    if len(y.terms) != 1 or not y.terms[0][0].is_structural_zero():
                        raise ParseError("division by an exponential polynomial is not supported", span)
                    y = y.terms[0][1]
                y = ratfun(y)
                if y.is_zero():
                    raise ParseError("zero denominator", span)
                return a * ExpoPoly.term(RatFun(1) / y)
            b = y if isinstance(y, ExpoPoly) else ExpoPoly.term(y)
            return a + b if op == "+" else a - b if op == "-" else a * b
        if max(rx, ry) == 1:
            a, b = ratfun(x), ratfun(y)
            if op == "/" and b.is_zero():
                raise ParseError("zero denominator", span)
            return {"+": lambda: a + b, "-": lambda: a - b, "*": lambda: a * b, "/": lambda: a / b}[op]()
        if op == "/":
            if is_zero(y).is_zero:
                raise ParseError("zero denominator", span)
            return x / y
        return {"+": lambda: x + y, "-": lambda: x - y, "*": lambda: x * y}[op]()
    except ConstZeroDivisionError as exc:
        raise ParseError("zero denominator", span) from exc


def _power(x, n: int, span: Span):
    if isinstance(x, WFrac):
        if n >= 0:
            return WFrac(x.P**n, x.Q**n)
        return WFrac(x.Q ** (-n), x.P ** (-n))
    if isinstance(x, ExpoPoly):
        if n < 0:
            raise ParseError("negative power of an exponential polynomial", span)
        return x**n
    if n < 0 and (isinstance(x, RatFun) and x.is_zero() or isinstance(x, ConstExpr) and is_zero(x).is_zero):
        raise ParseError("zero denominator", span)
    return x**n


def _exp_of(arg, span: Span):
    if isinstance(arg, ConstExpr):
        return cexp(arg)
    if isinstance(arg, RatFun) and arg.is_polynomial() and arg.num.degree <= 1:
        c1, c0 = arg.num[1], arg.num[0]
        return ExpoPoly.term(RatFun.constant(cexp(c0)), c1)
    raise ParseError("exp() takes a constant or a linear function c*z + c0", span)


# -- Pratt parser ------------------------------------------------------------------------

_BINDING = {"+": 10, "-": 10, "*": 20, "/": 20, "^": 40}


class _Parser:
    def __init__(self, tokens: list[Token], env: dict):
        self.toks = tokens
        self.k = 0
        self.env = env

    def peek(self) -> Token:
        return self.toks[self.k]

    def next(self) -> Token:
        t = self.toks[self.k]
        self.k += 1
        return t

    def skip_newlines(self):
        while self.peek().kind == "op" and self.peek().text == "\n":
            self.k += 1

    def expect(self, text: str) -> Token:
        t = self.next()
        if t.text != text:
            found = "end of input" if t.kind == "end" else repr(t.text if t.text != "\n" else "end of line")
            raise ParseError(f"expected {text!r}, found {found}", t.span)
        return t

    def expression(self, rbp: int = 0):
        t = self.next()
        left = self.nud(t)
        while True:
            t = self.peek()
            if t.kind != "op" or t.text not in _BINDING or _BINDING[t.text] <= rbp:
                break
            self.next()
            left = self.led(t, left)
        return left

    def nud(self, t: Token):
        if t.kind == "num":
            return const(int(t.text))
        if t.kind == "name":
            if t.text == "z":
                return RatFun.z()
            if t.text == "w":
                return WFrac(WPoly([0, 1]), WPoly([1]))
            if t.text == "i":
                return I
            if t.text == "pi":
                return PI
            if t.text == "exp":
                self.expect("(")
                arg = self.expression()
                self.expect(")")
                return _exp_of(arg, t.span)
            if t.text in self.env:
                return self.env[t.text]
            raise ParseError(f"unresolved name {t.text!r}", t.span)
        if t.text == "(":
            v = self.expression()
            self.expect(")")
            return v
        if t.text == "-":
            v = self.expression(30)
            return _binary("-", const(0), v, t.span) if not isinstance(v, WFrac) else _binary("*", const(-1), v, t.span)
        if t.text == "+":
            return self.expression(30)
        what = "end of input" if t.kind == "end" else ("end of line" if t.text == "\n" else repr(t.text))
        raise ParseError(f"unexpected {what}", t.span)

    def led(self, t: Token, left):
        if t.text == "^":
            right = self.expression(_BINDING["^"] - 1)
            n = as_int(right) if isinstance(right, ConstExpr) else None
            if n is None:
                raise ParseError("exponent must be an integer constant", t.span)
            return _power(left, n, t.span)
        right = self.expression(_BINDING[t.text])
        return _binary(t.text, left, right, t.span)


# -- scripts ---------------------------------------------------------------------------------


@dataclass
class Script:
    """Definitions in source order with their spans."""

    values: dict = field(default_factory=dict)
    spans: dict = field(default_factory=dict)
    order: list = field(default_factory=list)

    def __contains__(self, name: str) -> bool:
        return name in self.values

    def _need(self, name: str):
        if name not in self.values:
            raise ParseError(f"missing definition {name!r}")
        return self.values[name]

    def constant(self, name: str, default=None) -> ConstExpr:
        if name not in self.values and default is not None:
            return const(default)
        v = self._need(name)
        if isinstance(v, RatFun) and v.is_constant():
            return v.constant_value()
        if not isinstance(v, ConstExpr):
            raise ParseError(f"{name!r} must be a constant", self.spans.get(name))
        return v

    def ratfun(self, name: str, default=None) -> RatFun:
        if name not in self.values and default is not None:
            return ratfun(default)
        v = self._need(name)
        if isinstance(v, ExpoPoly):
            if len(v.terms) == 1 and v.terms[0][0].is_structural_zero():
                return v.terms[0][1]
            if not v.terms:
                return RatFun(0)
        if isinstance(v, (ExpoPoly, WFrac)):
            raise ParseError(f"{name!r} must be a rational function of z", self.spans.get(name))
        return ratfun(v)

    def expoly(self, name: str) -> ExpoPoly:
        v = self._need(name)
        if isinstance(v, WFrac):
            raise ParseError(f"{name!r} must not involve w", self.spans.get(name))
        return v if isinstance(v, ExpoPoly) else ExpoPoly.term(v)

    def wrational(self, name: str) -> WRational:
        v = self._need(name)
        if isinstance(v, ExpoPoly):
            raise ParseError(f"{name!r} must be rational in w, not an exponential", self.spans.get(name))
        return _lift_w(v).rational()

    def complex(self, name: str, default=0) -> complex:
        if name not in self.values:
            return complex(default)
        return complex(self.constant(name))


def parse(text: str, env: dict | None = None) -> Script:
    """Parse a script of ``name := expr`` definitions, or a single bare expression (named ``_``)."""
    toks = tokenize(text)
    p = _Parser(toks, dict(env or {}))
    script = Script()
    p.skip_newlines()
    while p.peek().kind != "end":
        start = p.peek()
        if start.kind == "name" and p.toks[p.k + 1].text == ":=":
            if start.text in RESERVED:
                raise ParseError(f"cannot redefine reserved name {start.text!r}", start.span)
            p.k += 2
            name = start.text
        else:
            name = "_"
        value = p.expression()
        if name in script.values:
            raise ParseError(f"duplicate definition of {name!r}", start.span)
        script.values[name] = value
        script.spans[name] = start.span
        script.order.append(name)
        p.env[name] = value
        t = p.peek()
        if t.kind == "end":
            break
        if t.text not in (";", "\n"):
            raise ParseError(f"unexpected {t.text!r}", t.span)
        while p.peek().text in (";", "\n") and p.peek().kind == "op":
            p.k += 1
    return script


def parse_value(text: str, env: dict | None = None):
    """The value of a single expression."""
    s = parse(text, env)
    if s.order != ["_"]:
        raise ParseError("expected a single expression")
    return s.values["_"]


def parse_expoly(text: str) -> ExpoPoly:
    v = parse_value(text)
    if isinstance(v, WFrac):
        raise ParseError("expected an exponential polynomial in z")
    return v if isinstance(v, ExpoPoly) else ExpoPoly.term(v)


def parse_ratfun(text: str) -> RatFun:
    s = Script({"_": parse_value(text)})
    return s.ratfun("_")


def parse_const(text: str) -> ConstExpr:
    s = Script({"_": parse_value(text)})
    return s.constant("_")


def parse_wrational(text: str) -> WRational:
    return _lift_w(parse_value(text)).rational()

