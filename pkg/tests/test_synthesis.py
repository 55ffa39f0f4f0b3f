import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import FREQS, gaussian, polys
from malmquist_lab.constfield import I, ONE, PI, cexp, const, is_zero
from malmquist_lab.ddeq import DelayEquation, verify_solution
from malmquist_lab.errors import MalmquistError
from malmquist_lab.frontend import parse_wrational
from malmquist_lab.ratfun import Poly, RatFun, ratfun
from malmquist_lab.synthesis import explain, linear_equation, solve_equation, solve_linear_form

z = RatFun.z()
E1 = cexp(1) - cexp(-1)


def _sound(a, a1, a0, fam):
    eq = linear_equation(a, a1, a0)
    return all(verify_solution(eq, fam.member(C)) for C in (1, 2, -3))


def test_periodic_family():
    fam = solve_linear_form(z, 0, PI * I * z)
    assert fam.found and fam.H == Poly([1]) and fam.d == PI * I
    assert fam.branch == "a1=0"
    assert _sound(z, 0, PI * I * z, fam)


def test_single_exponential_family():
    fam = solve_linear_form(z, E1, z)
    assert fam.found and fam.H == Poly([1]) and fam.d == ONE
    assert str(fam) == "C*exp(z)"
    assert _sound(z, E1, z, fam)


def test_two_i_branch_gives_linear_h():
    a0 = 1 + PI * I / 2 * z
    fam = solve_linear_form(z, 2 * I, a0)
    assert fam.found and fam.H == Poly.z() and fam.d == PI * I / 2
    assert fam.branch == "a1=2i"
    assert _sound(z, 2 * I, a0, fam)


def test_minus_two_i_branch():
    # H = z, d = -pi*i/2: H(z+1)(-i) - H(z-1)(i) = -2i z
    a0 = 1 - PI * I / 2 * z
    fam = solve_linear_form(z, -2 * I, a0)
    assert fam.found and fam.H == Poly.z() and fam.branch == "a1=-2i"
    assert _sound(z, -2 * I, a0, fam)


def test_mismatched_constant():
    fam = solve_linear_form(z, 5, z)
    assert not fam.found
    assert fam.trace[-1]["reason"].startswith("shift condition")
    with pytest.raises(MalmquistError):
        fam.member()


def test_unbounded_quotient():
    fam = solve_linear_form(z, 2 * I, z * z)
    assert not fam.found and "unbounded" in fam.trace[-1]["reason"]


def test_nonconstant_a1_yields_nothing():
    assert not solve_linear_form(z, z, z).found
    assert solve_linear_form(z, z, z).branch == "a1 nonconstant"


def test_zero_frequency_rejected():
    assert not solve_linear_form(z, 1, 1).found


def test_preconditions():
    with pytest.raises(MalmquistError):
        solve_linear_form(0, 1, z)
    with pytest.raises(MalmquistError):
        solve_linear_form(z, 0, 0)


def test_non_polynomial_a1_warns():
    fam = solve_linear_form(z, 1 / z, z)
    assert any("not a polynomial" in w for w in fam.warnings)


def test_explain_traces():
    ok = explain(z, E1, z)
    steps = [s["step"] for s in ok["steps"]]
    assert steps == ["branch", "d", "H", "shift-condition", "result"]
    assert ok["found"] and ok["d"] == "1" and ok["H"] == "1"
    bad = explain(z, 2 * I, z * z)
    assert bad["steps"][-1]["found"] is False and "unbounded" in bad["steps"][-1]["reason"]
    miss = explain(z, 5, z)
    assert miss["steps"][-2]["verdict"] == "NonZero"


def test_solve_equation_requires_linear_form():
    eq = DelayEquation(z, parse_wrational("(2*pi*i*z*w - 2*pi*i*z)/w"))
    with pytest.raises(MalmquistError):
        solve_equation(eq)
    assert solve_equation(linear_equation(z, E1, z)).found


# -- properties --------------------------------------------------------------

freqs = st.sampled_from([f for f in FREQS if not f.is_structural_zero()])
a_values = st.sampled_from([z, z + 1, (z * z + 1) / z, ratfun(PI), 1 / z])
hs = st.one_of(st.just(Poly([1])), st.builds(lambda c: Poly([c, 1]), gaussian))


@settings(max_examples=30)
@given(a_values, hs, freqs)
def test_constructed_families_are_found_and_sound(a, H, d):
    Hr = RatFun(H)
    a1 = (RatFun(H.shift(1)) * cexp(d) - RatFun(H.shift(-1)) * cexp(-d)) / Hr
    a0 = a * (Hr.derivative() / Hr + d)
    if a1.is_zero() and a0.is_zero():
        return
    fam = solve_linear_form(a, a1, a0)
    assert fam.found and fam.H == H.monic() and fam.d == d
    assert _sound(a, a1, a0, fam)


@settings(max_examples=40)
@given(a_values, polys(2), polys(2))
def test_random_polynomial_coefficients(a, p1, p0):
    a1, a0 = RatFun(p1), RatFun(p0)
    if a1.is_zero() and a0.is_zero():
        return
    fam = solve_linear_form(a, a1, a0)
    if not fam.found:
        return
    assert fam.H.degree <= 1
    assert _sound(a, a1, a0, fam)
    if a1.is_zero():
        assert cexp(2 * fam.d) == ONE and fam.H.degree == 0
    if fam.branch == "generic":
        assert fam.H.degree == 0


@settings(max_examples=30)
@given(st.integers(-3, 3), a_values)
def test_periodic_specialization(k, a):
    # a1 = 0 with d = k*pi*i
    if k == 0:
        return
    d = k * PI * I
    fam = solve_linear_form(a, 0, a * d)
    assert fam.found and fam.H == Poly([1])
    assert is_zero(cexp(2 * fam.d) - 1).is_zero
