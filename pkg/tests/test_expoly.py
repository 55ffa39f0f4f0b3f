import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from corpus import expolys, nonzero_expolys, points
from malmquist_lab.constfield import I, PI, cexp, const
from malmquist_lab.errors import ConstZeroDivisionError
from malmquist_lab.expoly import ExpoPoly, ExpoRational, epx_arith, epx_derivative, epx_eval, epx_is_zero, epx_shift
from malmquist_lab.ratfun import RatFun

z = RatFun.z()
ez = ExpoPoly.exp(1)
e2pi = ExpoPoly.exp(2 * PI * I)
Zx = ExpoPoly.term(z)

E_REF = 2.718281828459045  # frozen from mpmath.e


def test_arith_examples():
    assert epx_arith(ez, ez, "+") == ExpoPoly.term(2, 1)
    assert epx_arith(ez, ez, "*") == ExpoPoly.exp(2)
    assert epx_arith(ez + Zx, ez, "-") == Zx


def test_shift_examples():
    assert epx_shift(ExpoPoly.term(z, 1), 1) == ExpoPoly.term((z + 1) * cexp(1), 1)
    assert epx_shift(e2pi, 1) == e2pi
    assert epx_shift(e2pi, -1) == e2pi
    assert epx_shift(ExpoPoly.term(z * z), 1) == ExpoPoly.term(z * z + 2 * z + 1)


def test_derivative_examples():
    d = PI * I / 3
    assert epx_derivative(ExpoPoly.exp(d)) == ExpoPoly.term(d, d)
    assert epx_derivative(ExpoPoly.term(z, 1)) == ExpoPoly.term(1 + z, 1)
    assert epx_derivative(e2pi + Zx) == ExpoPoly.term(2 * PI * I, 2 * PI * I) + 1


def test_zero_examples():
    assert epx_is_zero(ez - ez).is_zero
    assert epx_is_zero(ExpoPoly.term(z, 1) + ExpoPoly.term(1 - z, 1) - ez).is_zero
    assert epx_is_zero(ez - ExpoPoly.exp(2)).is_nonzero


def test_eval_examples():
    assert epx_eval(ez, 0) == 1
    assert abs(epx_eval(e2pi + Zx, 1) - 2) < 1e-12
    assert abs(epx_eval(ExpoPoly.term(z, 1), 1) - E_REF) < 1e-14


def test_pole_raises():
    with pytest.raises(ConstZeroDivisionError):
        ExpoPoly.term(1 / z, 1).evaluate(0)


def test_frequencies_merge_exactly():
    # exp(2*pi*i) = 1 so 2*pi*i and pi*i*2 are one frequency
    f = ExpoPoly.exp(2 * PI * I) + ExpoPoly.exp(PI * I * 2)
    assert len(f) == 1


def test_flags():
    assert (ez + Zx).is_entire()
    assert not ExpoPoly.term(1 / z, 1).is_entire()
    assert ez.is_transcendental()
    assert not Zx.is_transcendental()


def test_printing():
    assert str(ez + Zx) in ("exp(z) + z", "z + exp(z)")
    assert str(ExpoPoly.exp(-1)) == "exp(-z)"
    assert str(ExpoPoly()) == "0"


def test_rational_never_reduced():
    r = ExpoRational(ez * ez, ez)
    assert r.den == ez
    assert not r.is_zero().is_zero
    assert (r - ez).is_zero().is_zero
    with pytest.raises(ConstZeroDivisionError):
        ExpoRational(ez, ez - ez)


@given(expolys())
def test_shift_round_trip(f):
    assert f.shift(1).shift(-1) == f


@given(expolys(2, 3), expolys(2, 3))
def test_product_rule(f, g):
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


@given(nonzero_expolys, st.lists(points, min_size=5, max_size=5))
def test_nonzero_is_numerically_nonzero(f, zs):
    vals = []
    for z0 in zs:
        try:
            vals.append(abs(f.evaluate(z0)))
        except ConstZeroDivisionError:
            pass
    assume(vals)
    assert max(vals) > 0


def _float_derivative(f, zs):
    # term rule on floats; the corpus only builds polynomial coefficients
    out = np.zeros_like(zs)
    for d, num, den in f.numeric_terms():
        p = num[::-1] / den[0]
        out = out + (np.polyval(np.polyder(p), zs) + d * np.polyval(p, zs)) * np.exp(d * zs)
    return out


@given(expolys(2, 3), expolys(2, 3), st.lists(points, min_size=5, max_size=5))
def test_symbolic_numeric_agreement(f, g, zs):
    zs = np.array(zs)
    h = f * g - f.shift(1) + g.derivative()
    ref = f.evaluate(zs) * g.evaluate(zs) - f.evaluate(zs + 1) + _float_derivative(g, zs)
    scale = max(1.0, float(np.max(np.abs(ref))))
    assert np.allclose(h.evaluate(zs), ref, rtol=1e-9, atol=1e-9 * scale)
