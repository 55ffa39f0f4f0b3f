"""The eleven acceptance criteria, one test each.

Every test prints a single ``criterion N: PASS|FAIL`` line with its wall
time, and the lines are repeated in the terminal summary.
"""

import contextlib
import math
import time

import numpy as np
import pytest

import golden
from conftest import record_criterion
from malmquist_lab.constfield import I, PI, cexp, const
from malmquist_lab.ddeq import (
    DelayEquation,
    DividedQuadratic,
    Linear,
    WPoly,
    WRational,
    classify,
    entire_obstruction,
    invert,
    lhs,
    substitute,
    verify_solution,
)
from malmquist_lab.expoly import ExpoPoly
from malmquist_lab.frontend import parse_expoly, parse_wrational
from malmquist_lab.nevanlinna import (
    characteristic_profile,
    counting_from_zeros,
    counting_oracle,
    geometric_grid,
    locate_zeros,
    log_diff_lemma_check,
    valiron_mohonko_check,
)
from malmquist_lab.ratfun import Poly, RatFun, ratfun
from malmquist_lab.synthesis import linear_equation, solve_linear_form

z = RatFun.z()
EZ = ExpoPoly.exp(1)
W3 = parse_expoly("exp(z)+z")
W5 = parse_expoly("exp(2*pi*i*z)+z")


@contextlib.contextmanager
def criterion(number: int, title: str, limit: float):
    t0 = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        dt = time.perf_counter() - t0
        within = dt < limit
        status = "PASS" if ok and within else "FAIL"
        extra = "" if within else f" (over the {limit:g} s limit)"
        record_criterion(number, f"criterion {number:2d}: {status}  {title}  [{dt:.2f} s]{extra}")
    assert dt < limit, f"criterion {number} took {dt:.2f} s, limit {limit} s"


def timed(limit: float, fn, *args):
    t0 = time.perf_counter()
    out = fn(*args)
    dt = time.perf_counter() - t0
    assert dt < limit, f"{fn.__name__} took {dt:.2f} s"
    return out


# 1 -------------------------------------------------------------------------

def test_criterion_01_golden_identities():
    with criterion(1, "verify accepts every golden equation", 13.0):
        for label, n, a in golden.cases():
            s = golden.script(n, a, "rhs", "sol")
            eq = DelayEquation(s.ratfun("a"), s.wrational("rhs"))
            assert timed(1.0, verify_solution, eq, s.expoly("sol")), label


# 2 -------------------------------------------------------------------------

def test_criterion_02_inverse_reconstruction():
    with criterion(2, "invert rebuilds every golden right-hand side", 13.0):
        for label, n, a in golden.cases():
            s = golden.script(n, a, "rhs", "H", "d", "r")
            eq = timed(1.0, invert, s.ratfun("H").num, s.constant("d"), s.ratfun("r", 0), s.ratfun("a"))
            assert eq.rhs == s.wrational("rhs"), label
        # the z*exp(z) coefficients spelled out
        for a in (z, z + 1, (z * z + 1) / z):
            form = classify(invert(Poly.z(), 1, 0, a))
            assert isinstance(form, Linear)
            assert form.a1 == (cexp(1) * (z + 1) - cexp(-1) * (z - 1)) / z
            assert form.a0 == a * (1 + z) / z


# 3 -------------------------------------------------------------------------

def test_criterion_03_classification():
    with criterion(3, "golden equations classify with the printed coefficients", 13.0):
        for label, n, a in golden.cases():
            s = golden.script(n, a, "rhs")
            form = timed(1.0, classify, DelayEquation(s.ratfun("a"), s.wrational("rhs")))
            name, coeffs = golden.expected_form(n, a)
            assert form.name == name, label
            assert isinstance(form, Linear if n in golden.LINEAR else DividedQuadratic)
            for k, v in coeffs.items():
                assert getattr(form, k) == v, (label, k)


# 4 -------------------------------------------------------------------------

def test_criterion_04_synthesis():
    with criterion(4, "synthesis families C exp(p pi i z) and C z exp(pi i z/2)", 4.0):
        cases = [(z, 0, p * PI * I * z, Poly([1]), p * PI * I) for p in (1, 2, 3)]
        cases.append((z, 2 * I, 1 + PI * I / 2 * z, Poly.z(), PI * I / 2))
        for a, a1, a0, H, d in cases:
            fam = timed(1.0, solve_linear_form, a, a1, a0)
            assert fam.found and fam.H == H and fam.d == const(d)
            eq = linear_equation(a, a1, a0)
            for C in (1, 2, -3):
                assert verify_solution(eq, fam.member(C))


# 5 -------------------------------------------------------------------------

def _admissible_inputs(count: int, seed: int = 20240):
    """Random (a, a1, a0) with a != 0 and a1 polynomial.

    Most inputs are built backwards from a candidate H e^{dz} with deg H up
    to 3, so the logarithmic-derivative step does return H and the shift
    condition decides; the rest are unconstrained random polynomials.
    """
    rng = np.random.default_rng(seed)
    freqs = [const(1), const(-1), const(2), PI * I, PI * I / 2, -PI * I / 2, 2 * PI * I, I]
    a_pool = [z, z + 1, (z * z + 1) / z, ratfun(3), 1 / z, z * z - 2]

    def small():
        return int(rng.integers(-3, 4)) + int(rng.integers(-3, 4)) * I

    out = []
    for _ in range(count):
        a = a_pool[rng.integers(len(a_pool))]
        if rng.random() < 0.75:
            deg = int(rng.integers(0, 4))
            H = Poly([small() for _ in range(deg)] + [1])
            d = freqs[rng.integers(len(freqs))]
            a0 = a * (RatFun(H.derivative()) / RatFun(H) + d)
            choice = rng.integers(4)
            if choice == 0:
                a1 = ratfun(cexp(d) - cexp(-d))
            elif choice == 1:
                a1 = ratfun(2 * I if rng.random() < 0.5 else -2 * I)
            elif choice == 2:
                a1 = ratfun(0)
            else:
                a1 = RatFun(Poly([small() for _ in range(int(rng.integers(1, 3)))]))
        else:
            a1 = RatFun(Poly([small() for _ in range(int(rng.integers(1, 3)))]))
            a0 = RatFun(Poly([small() for _ in range(int(rng.integers(1, 3)))]))
        if a1.is_zero() and a0.is_zero():
            a0 = ratfun(1)
        out.append((a, a1, a0))
    return out


def test_criterion_05_degree_of_h():
    with criterion(5, "no synthesized H of degree >= 2 on 200 random inputs", 30.0):
        inputs = _admissible_inputs(200)
        found = high = 0
        for a, a1, a0 in inputs:
            fam = solve_linear_form(a, a1, a0)
            high += any(st.get("deg_H", 0) >= 2 for st in fam.trace)
            if fam.found:
                found += 1
                assert fam.H.degree <= 1, (str(a), str(a1), str(a0))
        # the corpus must reach the shift condition with high-degree candidates
        assert found >= 10 and high >= 50, (found, high)


# 6 -------------------------------------------------------------------------

def test_criterion_06_valiron_mohonko():
    with criterion(6, "T(r, R(w))/T(r, w) near deg_w R at r = 100", 60.0):
        sq = valiron_mohonko_check(parse_wrational("w^2"), EZ, [100.0])
        assert 1.9 <= sq.at(100) <= 2.1
        R_quad = golden.script("exp_plus_z", "z", "rhs").wrational("rhs")
        curve = valiron_mohonko_check(R_quad, W3, [100.0])
        assert 1.85 <= curve.at(100) <= 2.15


# 7 -------------------------------------------------------------------------

def test_criterion_07_log_difference():
    with criterion(7, "m(r, w(z+1)/w(z))/T(r, w) <= 0.05 at r = 100", 60.0):
        for w in (EZ, W3):
            assert log_diff_lemma_check(w, 1, [100.0]).at(100) <= 0.05


# 8 -------------------------------------------------------------------------

def test_criterion_08_order():
    with criterion(8, "order estimate of exp(z)+z and exp(2 pi i z)+z in [0.95, 1.05]", 120.0):
        grid = geometric_grid(10, 1000, 24)
        for w in (W3, W5):
            prof = characteristic_profile(w, 0, grid)
            assert 0.95 <= prof.order_estimate <= 1.05, (str(w), prof.order_estimate)


# 9 -------------------------------------------------------------------------

def test_criterion_09_deficiency():
    with criterion(9, "deficiencies near 0, omitted value exactly 1", 120.0):
        grid = geometric_grid(10, 1000, 24)
        assert abs(characteristic_profile(W3, 0, grid).deficiency_estimate) <= 0.15
        assert abs(characteristic_profile(EZ, 1, grid).deficiency_estimate) <= 0.15
        assert characteristic_profile(EZ, 0, grid).deficiency_estimate == 1


# 10 ------------------------------------------------------------------------

ORACLE_CORPUS = [
    ("exp(z)+z", 0, 30.0),
    ("exp(z)+z", 1, 40.0),
    ("exp(z)+z", 2 + 1j, 25.0),
    ("exp(2*pi*i*z)+z", 0, 4.0),
    ("exp(2*pi*i*z)+z", 1j, 3.5),
    ("exp(2*pi*i*z)+1", 0, 5.2),
    ("exp(z)", 1, 20.0),
    ("exp(z)", -2, 15.0),
    ("z*exp(z)", 1, 20.0),
    ("z*exp(z)+z^2", 0, 12.0),
    ("exp(2*z)-z", 0, 15.0),
    ("exp(i*z)+exp(-i*z)", 0, 20.0),
    ("exp(z)+exp(-z)-z", 0, 12.0),
    ("(z-1)*exp(z)+1", 0, 18.0),
    ("exp(1/2*z)+z^2-1", 0, 25.0),
    ("z^3-2*z+1", 0, 3.0),
    ("z^2*(z-1)", 0, 2.5),
    ("exp(pi*i*z)-z", 0, 6.0),
    ("(exp(1)-exp(-1))*exp(z)+z", 0, 20.0),
    ("exp(2*pi*i*z)+exp(z)", 0, 5.0),
]


def _float_derivative(f, zs):
    out = np.zeros_like(zs)
    for d, num, den in f.numeric_terms():
        p = num[::-1] / den[0]
        out = out + (np.polyval(np.polyder(p), zs) + d * np.polyval(p, zs)) * np.exp(d * zs)
    return out


def test_criterion_10_oracles():
    with criterion(10, "N(r) matches n(t)/t integration; symbolic matches numeric", 300.0):
        for text, b, r in ORACLE_CORPUS:
            f = parse_expoly(text)
            N_loc = counting_from_zeros(locate_zeros(f, b, r).zeros, r)[1]
            N_int = counting_oracle(f, b, r)
            assert abs(N_int - N_loc) <= 1e-4 * max(1.0, abs(N_loc)), (text, b, r, N_loc, N_int)

        rng = np.random.default_rng(7)
        R = parse_wrational("((exp(1)-exp(-1))*w^2 + (2 - z)*w + z*(1-z))/w")
        for text, _, _ in ORACLE_CORPUS:
            f = parse_expoly(text)
            zs = rng.uniform(-2, 2, 20) + 1j * rng.uniform(-2, 2, 20)
            fv = f.evaluate(zs)
            keep = np.abs(fv) > 1e-3
            zs, fv = zs[keep], fv[keep]
            eq = DelayEquation(z + 1, R)
            sym = lhs(eq, f).evaluate(zs)
            num = f.evaluate(zs + 1) - f.evaluate(zs - 1) + (zs + 1) * _float_derivative(f, zs) / fv
            assert np.all(np.abs(sym - num) <= 1e-9 * np.maximum(1.0, np.abs(num))), text
            sym_r = substitute(R, f).evaluate(zs)
            num_r = R.evaluate(zs, fv)
            assert np.all(np.abs(sym_r - num_r) <= 1e-9 * np.maximum(1.0, np.abs(num_r))), text


# 11 ------------------------------------------------------------------------

def test_criterion_11_nonexistence_properties():
    with criterion(11, "obstruction and empty-family property suites", 60.0):
        rng = np.random.default_rng(11)
        W = WPoly.w()

        def small_poly(deg):
            return RatFun(Poly([int(rng.integers(-3, 4)) for _ in range(deg)] + [int(rng.integers(1, 4))]))

        for _ in range(40):
            root = small_poly(int(rng.integers(0, 3)))
            P = WPoly([small_poly(1), 1])
            # P(z, root) != 0 unless root happens to cancel; check directly
            Q = W - root
            eq = DelayEquation(z, WRational(P, Q))
            cancels = P.at(ExpoPoly.term(root)).is_identically_zero()
            expected = "not-obstructed" if cancels or eq.rhs.Q.degree == 0 else "obstructed"
            assert entire_obstruction(eq) == expected
            # a double-root denominator (w - root)^2 is a perfect-square discriminant
            eq2 = DelayEquation(z, WRational(WPoly([1]), Q * Q))
            assert entire_obstruction(eq2) == "obstructed"
            # roots at 0 never obstruct
            eq3 = DelayEquation(z, WRational(P, W))
            assert entire_obstruction(eq3) == "not-obstructed"

        for _ in range(40):
            a = [z, z + 1, (z * z + 1) / z][rng.integers(3)]
            a0 = small_poly(int(rng.integers(1, 3))) * a + small_poly(0) * z * a
            q = a0 / a
            assert not q.is_constant()
            assert not solve_linear_form(a, 0, a0).found
