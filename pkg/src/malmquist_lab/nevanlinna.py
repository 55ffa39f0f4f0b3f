"""Numerical Nevanlinna quantities for exponential polynomials.

Everything here is double precision.  Values are carried in logarithmic
form (``log f = M + log s`` with ``|s|`` moderate) so that |exp(dz)| on
circles of radius 10^3 neither overflows nor underflows.

Zero counts on circles use the trapezoid rule for (1/2 pi i) \\oint f'/(f-b).
Zero location uses quadrisection with cell counts from the discrete
argument change along cell edges, which makes it an independent route
from the circle counts.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .constfield import I, const, is_zero
from .ddeq import WPoly, WRational
from .errors import ConstZeroDivisionError, ConvergenceError, MalmquistError
from .expoly import ExpoPoly, ExpoRational, expoly
from .ratfun import RatFun, poly_gcd

K_CAP = 2**20
CELL_BUDGET = 100_000
CLUSTER_TOL = 1e-6
NEWTON_RTOL = 1e-10
_SPLITS = (0.5173, 0.4829, 0.5391, 0.4617)
_PERTURB = (0.002, -0.002, 0.004, -0.004, 0.008)


# -- numeric evaluation in log form ------------------------------------------------


class _Numeric:
    """Sum of terms num(z)/den(z)*exp(d z), evaluated as complex logarithms."""

    def __init__(self, terms):
        self.terms = [(complex(d), np.asarray(n, complex), np.asarray(m, complex)) for d, n, m in terms]
        self.spread = max((abs(d) for d, _, _ in self.terms), default=0.0)
        self.degree = max((len(n) - 1 for _, n, _ in self.terms), default=0)

    @classmethod
    def of(cls, f, b=0) -> "_Numeric":
        f = expoly(f)
        terms = [(d, n[::-1], m[::-1]) for d, n, m in f.numeric_terms()]
        b = complex(b)
        if b != 0:
            terms.append((0j, np.array([-b]), np.array([1.0 + 0j])))
        return cls(terms)

    def empty(self) -> bool:
        return not self.terms

    def logterms(self, z: np.ndarray) -> np.ndarray:
        out = np.empty((len(self.terms),) + z.shape, complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            for k, (d, num, den) in enumerate(self.terms):
                v = np.log(np.polyval(num, z)) + d * z
                if len(den) > 1 or den[0] != 1:
                    v = v - np.log(np.polyval(den, z))
                out[k] = v
        return out

    def logmajorant(self, z: np.ndarray) -> np.ndarray:
        """log of sum |c_k||z|^k |exp(dz)| / |den(z)| over terms: the size f is measured against."""
        az = np.abs(z)
        out = np.full(z.shape, -np.inf)
        with np.errstate(divide="ignore", invalid="ignore"):
            for d, num, den in self.terms:
                v = np.log(np.polyval(np.abs(num), az)) + (d * z).real
                if len(den) > 1 or den[0] != 1:
                    v = v - np.log(np.abs(np.polyval(den, z)))
                out = np.logaddexp(out, v)
        return out

    def logval(self, z: np.ndarray) -> np.ndarray:
        """Complex log of the sum (imaginary part is the principal argument)."""
        lt = self.logterms(z)
        M = np.max(lt.real, axis=0)
        M = np.where(np.isfinite(M), M, 0.0)
        with np.errstate(divide="ignore", invalid="ignore"):
            s = np.sum(np.exp(lt - M), axis=0)
            return M + np.log(s)

    def logabs(self, z: np.ndarray) -> np.ndarray:
        return self.logval(z).real


def _common(f: _Numeric, g: _Numeric, z: np.ndarray):
    """(s_f, s_g, scale) with f = e^M s_f, g = e^M s_g for one shared M."""
    lf = f.logterms(z)
    lg = g.logterms(z) if not g.empty() else np.empty((0,) + z.shape, complex)
    both = np.concatenate([lf.real, lg.real]) if lg.size else lf.real
    M = np.max(both, axis=0)
    M = np.where(np.isfinite(M), M, 0.0)
    with np.errstate(invalid="ignore", over="ignore"):
        sf = np.exp(lf - M).sum(axis=0)
        sg = np.exp(lg - M).sum(axis=0) if lg.size else np.zeros_like(sf)
        scale = np.exp(f.logmajorant(z) - M)
    return sf, sg, scale


class _Pair:
    """f - b together with its derivative, for ratios and Newton steps."""

    def __init__(self, f, b=0):
        f = expoly(f)
        if all(d.is_structural_zero() and h.is_constant() for d, h in f.terms):
            if complex(f.evaluate(0.0)) == complex(b):
                raise MalmquistError("f - b vanishes identically")
        self.f = _Numeric.of(f, b)
        self.fp = _Numeric.of(f.derivative())
        if self.f.empty():
            raise MalmquistError("f - b vanishes identically")

    def ratio(self, z):
        sf, sg, _ = _common(self.f, self.fp, z)
        with np.errstate(divide="ignore", invalid="ignore"):
            return sg / sf

    def newton(self, z0: complex, mult: int = 1, iters: int = 80):
        z = complex(z0)
        for _ in range(iters):
            sf, sg, scale = _common(self.f, self.fp, np.array([z]))
            if sf[0] == 0:
                return z, 0.0
            if sg[0] == 0 or not np.isfinite(sg[0]):
                break
            step = mult * sf[0] / sg[0]
            z -= step
            if abs(step) <= 1e-15 * max(1.0, abs(z)):
                break
        sf, _, scale = _common(self.f, self.fp, np.array([z]))
        return z, float(abs(sf[0]) / scale[0]) if scale[0] else float("inf")


def _log_modulus(f) -> "callable":
    """log|f| for an ExpoPoly or ExpoRational, vectorized over z."""
    if isinstance(f, ExpoRational):
        num, den = _Numeric.of(f.num), _Numeric.of(f.den)
        return lambda z: num.logabs(z) - den.logabs(z)
    n = _Numeric.of(f)
    return n.logabs


def _start_k(spread: float, degree: int, r: float) -> int:
    need = max(64.0, 8.0 * (spread * r + degree + 1))
    return int(2 ** math.ceil(math.log2(need)))


# -- proximity ---------------------------------------------------------------------


def _circle_mean(fn, r: float, k0: int, rtol: float = 1e-8, cap: int = K_CAP) -> float:
    """Nested trapezoid mean of fn over |z| = r, doubling K until converged."""
    k = k0
    theta = 2 * np.pi * np.arange(k) / k
    total = float(np.sum(fn(r * np.exp(1j * theta))))
    prev = total / k
    estimates = [prev]
    while k < cap:
        theta = 2 * np.pi * (np.arange(k) + 0.5) / k
        total += float(np.sum(fn(r * np.exp(1j * theta))))
        k *= 2
        cur = total / k
        estimates.append(cur)
        if abs(cur - prev) <= rtol * abs(cur) + 1e-13:
            return cur
        prev = cur
    raise ConvergenceError(f"proximity quadrature did not converge at r={r} with K={cap}", estimates[-2:])


def _spread_of(f) -> tuple[float, int]:
    parts = [f.num, f.den] if isinstance(f, ExpoRational) else [expoly(f)]
    spread, deg = 0.0, 0
    for p in parts:
        n = _Numeric.of(p)
        spread = max(spread, n.spread)
        deg = max(deg, n.degree)
    return spread, deg


def proximity(f, r: float) -> float:
    """m(r, f) = (1/2 pi) \\int log+ |f(r e^{it})| dt."""
    if r <= 0:
        raise ValueError("radius must be positive")
    lm = _log_modulus(f)
    spread, deg = _spread_of(f)
    return _circle_mean(lambda z: np.maximum(lm(z), 0.0), r, _start_k(spread, deg, r))


def mean_log_modulus(f, r: float) -> float:
    """(1/2 pi) \\int log|f(r e^{it})| dt (Jensen's left-hand side)."""
    lm = _log_modulus(f)
    spread, deg = _spread_of(f)
    return _circle_mean(lm, r, _start_k(spread, deg, r))


# -- zero counting on circles -------------------------------------------------------


@dataclass(frozen=True)
class CircleCount:
    count: int
    radius: float
    residual: float
    perturbed: bool
    nodes: int


def _circle_count(pair: _Pair, r: float, center: complex = 0j, cap: int = K_CAP):
    """(count, residual, K) or None when the quadrature does not settle."""
    k = _start_k(pair.f.spread + pair.fp.spread, pair.f.degree, r + abs(center))
    theta = 2 * np.pi * np.arange(k) / k
    u = r * np.exp(1j * theta)
    total = np.sum(u * pair.ratio(center + u))
    prev = total / k
    while k < cap:
        theta = 2 * np.pi * (np.arange(k) + 0.5) / k
        u = r * np.exp(1j * theta)
        total += np.sum(u * pair.ratio(center + u))
        k *= 2
        cur = total / k
        if not np.isfinite(cur):
            return None
        n = round(cur.real)
        res = abs(cur - n)
        if abs(cur - prev) < 1e-4 and res < 0.25:
            return int(n), float(res), k
        prev = cur
    return None


def count_zeros_detail(f, b, r: float) -> CircleCount:
    """Argument-principle count of zeros of f - b in |z| <= r, with diagnostics."""
    if r <= 0:
        raise ValueError("radius must be positive")
    pair = _Pair(f, b)
    for p in (0.0,) + _PERTURB:
        rr = r * (1 + p)
        got = _circle_count(pair, rr)
        if got is not None:
            return CircleCount(got[0], rr, got[1], p != 0, got[2])
        # dense zero rows near the circle: refine panels locally instead
        got = adaptive_circle_count(pair, rr)
        if got is not None:
            return CircleCount(got[0], rr, got[1], p != 0, 0)
    raise ConvergenceError(f"zero of f - b too close to |z| = {r}; perturbation failed")


def count_zeros(f, b, r: float) -> int:
    return count_zeros_detail(f, b, r).count


def origin_multiplicity(f, b=0, max_order: int = 32) -> int | None:
    """Exact order of vanishing of f - b at z = 0, or None if undecidable.

    Floating evaluation cannot resolve a multiple zero at the origin (the
    located point drifts by about eps^(1/m)), and N(r) is sensitive to it
    through log(r/|z|), so the origin is settled symbolically.
    """
    b = complex(b)
    g = expoly(f) - (const(Fraction(b.real)) + const(Fraction(b.imag)) * I)
    if g.is_identically_zero():
        raise MalmquistError("f - b vanishes identically")
    for k in range(max_order + 1):
        try:
            val = sum((h(0) for _, h in g.terms), const(0))
        except ConstZeroDivisionError:
            return None
        v = is_zero(val)
        if v.is_unknown:
            return None
        if v.is_nonzero:
            return k
        g = g.derivative()
    return None


# -- zero location ---------------------------------------------------------------------


class _EdgeHit(Exception):
    pass


def _wrap(x: np.ndarray) -> np.ndarray:
    return (x + np.pi) % (2 * np.pi) - np.pi


def _winding(num: _Numeric, z0: complex, z1: complex) -> float:
    """Total argument change of f along the segment z0 -> z1."""
    length = abs(z1 - z0)
    n0 = int(min(200_000, max(8, math.ceil(2 * length * (num.spread + 1)))))
    t = np.linspace(0.0, 1.0, n0 + 1)
    L = num.logval(z0 + (z1 - z0) * t)
    min_dt = 1e-10
    while True:
        if not np.all(np.isfinite(L)):
            raise _EdgeHit()
        dl = np.diff(L)
        step = np.abs(dl.real) + np.abs(_wrap(dl.imag))
        bad = np.nonzero(step > 0.6)[0]
        if bad.size == 0:
            return float(np.sum(_wrap(dl.imag)))
        if np.min(t[bad + 1] - t[bad]) < min_dt:
            raise _EdgeHit()
        mid = 0.5 * (t[bad] + t[bad + 1])
        Lm = num.logval(z0 + (z1 - z0) * mid)
        t = np.insert(t, bad + 1, mid)
        L = np.insert(L, bad + 1, Lm)


def _rect_count(num: _Numeric, x0, x1, y0, y1) -> int:
    A, B, C, D = complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)
    w = _winding(num, A, B) + _winding(num, B, C) + _winding(num, C, D) + _winding(num, D, A)
    return round(w / (2 * np.pi))


def _split_counts(num: _Numeric, x0, x1, y0, y1, fx, fy):
    xs, ys = x0 + fx * (x1 - x0), y0 + fy * (y1 - y0)
    A, B, C, D = complex(x0, y0), complex(x1, y0), complex(x1, y1), complex(x0, y1)
    Pb, Pr, Pt, Pl = complex(xs, y0), complex(x1, ys), complex(xs, y1), complex(x0, ys)
    O = complex(xs, ys)
    W = lambda p, q: _winding(num, p, q)  # noqa: E731
    aPb, PbB, BPr, PrC, CPt, PtD, DPl, PlA = (
        W(A, Pb), W(Pb, B), W(B, Pr), W(Pr, C), W(C, Pt), W(Pt, D), W(D, Pl), W(Pl, A)
    )
    oPb, oPr, oPt, oPl = W(O, Pb), W(O, Pr), W(O, Pt), W(O, Pl)
    tau = 2 * np.pi
    children = [
        ((x0, xs, y0, ys), aPb - oPb + oPl + PlA),
        ((xs, x1, y0, ys), PbB + BPr - oPr + oPb),
        ((xs, x1, ys, y1), oPr + PrC + CPt - oPt),
        ((x0, xs, ys, y1), -oPl + oPt + PtD + DPl),
    ]
    return [(box, round(w / tau)) for box, w in children]


@dataclass(frozen=True)
class ZeroSet:
    """Zeros of f - b in |z| <= R with multiplicities."""

    zeros: tuple  # of (complex, int)
    R: float
    count: int
    cells: int
    max_residual: float
    circle: CircleCount | None = None

    @property
    def total(self) -> int:
        return sum(m for _, m in self.zeros)

    def distinct(self) -> int:
        return len(self.zeros)


def _merge(found: list[tuple[complex, int]], tol: float) -> list[tuple[complex, int]]:
    out: list[list] = []
    for z, m in sorted(found, key=lambda t: (t[0].real, t[0].imag)):
        for item in out:
            if abs(item[0] - z) <= tol:
                tot = item[1] + m
                item[0] = (item[0] * item[1] + z * m) / tot
                item[1] = tot
                break
        else:
            out.append([z, m])
    return [(complex(z), int(m)) for z, m in out]


def _find_in_square(pair: _Pair, half: float, budget: int = CELL_BUDGET):
    num = pair.f
    for grow in (1.0137, 1.0291, 1.0419):
        h = half * grow
        try:
            total = _rect_count(num, -h, h, -h, h)
            break
        except _EdgeHit:
            continue
    else:
        raise ConvergenceError("could not place the bounding square away from zeros")
    stack = [(-h, h, -h, h, total)]
    found: list[tuple[complex, int]] = []
    cells = 0
    worst = 0.0
    while stack:
        x0, x1, y0, y1, cnt = stack.pop()
        cells += 1
        if cells > budget:
            raise ConvergenceError(f"zero location exceeded the budget of {budget} cells")
        if cnt <= 0:
            continue
        size = max(x1 - x0, y1 - y0)
        center = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
        if cnt == 1 or size < CLUSTER_TOL:
            z, res = pair.newton(center, mult=cnt)
            pad = 1e-9 * max(1.0, abs(center)) + (size if size < CLUSTER_TOL else 0.0)
            inside = x0 - pad <= z.real <= x1 + pad and y0 - pad <= z.imag <= y1 + pad
            if inside and res < NEWTON_RTOL:
                found.append((z, cnt))
                worst = max(worst, res)
                continue
            if size < CLUSTER_TOL:
                # a residual test is meaningless at a multiple zero; keep the modified-Newton point if it stayed put
                found.append((z if inside else center, cnt))
                continue
        for k, fx in enumerate(_SPLITS):
            fy = _SPLITS[(k + 1) % len(_SPLITS)]
            try:
                kids = _split_counts(num, x0, x1, y0, y1, fx, fy)
            except _EdgeHit:
                continue
            if sum(c for _, c in kids) == cnt:
                break
        else:
            raise ConvergenceError("quadrisection count mismatch")
        for (a, b_, c, d), n in kids:
            if n:
                stack.append((a, b_, c, d, n))
    return found, cells, worst


def _snap_origin(zeros, n0: int | None, R: float):
    """Replace the clusters nearest 0 by an exact zero of multiplicity n0 at the origin."""
    if not n0:
        return zeros
    near = sorted(zeros, key=lambda t: abs(t[0]))
    total, k = 0, 0
    while k < len(near) and total < n0:
        total += near[k][1]
        k += 1
    if total != n0 or abs(near[k - 1][0]) > 1e-3 * max(1.0, R):
        return zeros
    return [(0j, n0)] + near[k:]


def locate_zeros(f, b, R: float, budget: int = CELL_BUDGET) -> ZeroSet:
    """All zeros of f - b in |z| <= R, polished by Newton and cross-checked by a circle count."""
    pair = _Pair(f, b)
    circle = count_zeros_detail(f, b, R)
    found, cells, worst = _find_in_square(pair, max(R, circle.radius), budget)
    zeros = _snap_origin(_merge(found, CLUSTER_TOL), origin_multiplicity(f, b), R)
    inside = [(z, m) for z, m in zeros if abs(z) <= circle.radius]
    total = sum(m for _, m in inside)
    if total != circle.count:
        raise ConvergenceError(
            f"located {total} zeros but the argument principle gives {circle.count} in |z| <= {circle.radius}"
        )
    kept = tuple(sorted(((z, m) for z, m in inside if abs(z) <= R), key=lambda t: (abs(t[0]), t[0].imag)))
    return ZeroSet(kept, R, sum(m for _, m in kept), cells, worst, circle)


# -- counting functions ---------------------------------------------------------------------

_ORIGIN = 1e-9


def counting_from_zeros(zeros, r: float, distinct: bool = False) -> tuple[int, float]:
    """(n(r), N(r)) from a list of (location, multiplicity)."""
    n = 0
    N = 0.0
    for z, m in zeros:
        a = abs(z)
        if a > r:
            continue
        k = 1 if distinct else m
        n += k
        N += k * math.log(r) if a < _ORIGIN else k * math.log(r / a)
    return n, N


_GL10 = np.polynomial.legendre.leggauss(10)
_GL20 = np.polynomial.legendre.leggauss(20)


def _panel_rule(pair: _Pair, r: float, center: complex, a: np.ndarray, b: np.ndarray, rule):
    x, wts = rule
    half = 0.5 * (b - a)
    theta = (0.5 * (a + b))[:, None] + half[:, None] * x[None, :]
    u = r * np.exp(1j * theta)
    vals = u * pair.ratio(center + u)
    return half * (vals @ wts) / (2 * np.pi), half * (np.abs(vals) @ wts) / (2 * np.pi)


def adaptive_circle_count(pair: _Pair, r: float, center: complex = 0j, tol: float = 1e-6):
    """Argument-principle count by adaptive Gauss-Legendre panels in the angle.

    Panels are halved where the 10- and 20-point rules disagree, so a zero
    at distance delta from the circle costs about log(r/delta) refinements.
    Returns (count, residual) or None if a panel collapses onto a zero.
    """
    n0 = max(16, _start_k(pair.f.spread + pair.fp.spread, pair.f.degree, r + abs(center)) // 8)
    edges = np.linspace(0.0, 2 * np.pi, n0 + 1)
    a, b = edges[:-1], edges[1:]
    total = 0j
    for _ in range(80):
        if a.size == 0:
            break
        coarse, _ = _panel_rule(pair, r, center, a, b, _GL10)
        fine, mag = _panel_rule(pair, r, center, a, b, _GL20)
        if not np.all(np.isfinite(fine)):
            return None
        err = np.abs(fine - coarse)
        # the relative floor absorbs cancellation noise in f - b next to a zero
        ok = err <= np.maximum(tol * (b - a) / (2 * np.pi), 1e-9 * mag)
        total += fine[ok].sum()
        a, b = a[~ok], b[~ok]
        if a.size and (np.min(b - a) < 1e-13 or a.size > 4096):
            return None
        mid = 0.5 * (a + b)
        a, b = np.concatenate([a, mid]), np.concatenate([mid, b])
    else:
        return None
    n = round(total.real)
    res = abs(total - n)
    if res >= 0.25:
        return None
    return int(n), float(res)


def counting_oracle(f, b, r: float, log_tol: float = 1e-6) -> float:
    """N(r) as the integral of n(t)/t with n(t) from circle counts only.

    n(t) is a nondecreasing step function, so the trapezoid rule in log t
    is exact on any interval whose endpoint counts agree; intervals with
    a jump are bisected until narrower than ``log_tol``, which bounds the
    error by half that width per zero.
    """
    pair = _Pair(f, b)

    def n_at(lo: float, hi: float):
        for s in (0.5, 0.31, 0.69, 0.17, 0.83):
            t = math.exp((1 - s) * math.log(lo) + s * math.log(hi))
            got = adaptive_circle_count(pair, t)
            if got is not None:
                return t, got[0]
        raise ConvergenceError(f"circle count failed on every trial radius in [{lo}, {hi}]")

    # the origin multiplicity is exact; a small circle only has to confirm
    # that no other zero hides inside it
    exact0 = origin_multiplicity(f, b)
    for t_lo in (r * 1e-9, r * 1e-7, r * 1e-5):
        got = adaptive_circle_count(pair, t_lo)
        if got is not None and (exact0 is None or got[0] == exact0):
            break
    else:
        raise ConvergenceError("circle count failed near the origin")
    n0 = got[0]
    got = adaptive_circle_count(pair, r)
    if got is None:
        raise ConvergenceError(f"zero of f - b on |z| = {r}")
    n_r = got[0]
    total = n0 * math.log(r)
    stack = [(t_lo, n0, r, n_r)]
    while stack:
        a, na, c, nc = stack.pop()
        if na == nc:
            total += (na - n0) * math.log(c / a)
            continue
        if math.log(c / a) < log_tol:
            m = math.sqrt(a * c)
            total += (na - n0) * math.log(m / a) + (nc - n0) * math.log(c / m)
            continue
        m, nm = n_at(a, c)
        stack.append((a, na, m, nm))
        stack.append((m, nm, c, nc))
    return total


def jensen_counting(f, b, r: float) -> float:
    """N(r, 1/(f-b)) from Jensen's formula; requires f(0) != b."""
    f = expoly(f)
    v0 = abs(complex(f.evaluate(0.0)) - complex(b))
    if v0 == 0:
        raise MalmquistError("Jensen's formula needs f(0) != b")
    pair = _Numeric.of(f, b)
    k = _start_k(pair.spread, pair.degree, r)
    return _circle_mean(pair.logabs, r, k) - math.log(v0)


# -- profiles -----------------------------------------------------------------------------------


def geometric_grid(rmin: float = 10.0, rmax: float = 1000.0, points: int = 24) -> np.ndarray:
    return np.geomspace(rmin, rmax, points)


def _slope(x: np.ndarray, y: np.ndarray) -> float:
    ok = np.isfinite(x) & np.isfinite(y)
    if ok.sum() < 2:
        return float("nan")
    return float(np.polyfit(x[ok], y[ok], 1)[0])


@dataclass
class CharProfile:
    r_grid: np.ndarray
    m: np.ndarray
    n: np.ndarray
    N: np.ndarray
    Nbar: np.ndarray
    T: np.ndarray
    target: complex
    order_estimate: float
    hyperorder_estimate: float
    deficiency_estimate: float
    zeros: ZeroSet | None = None
    hyperorder_unreliable: bool = True
    notes: list = field(default_factory=list)

    def rows(self):
        for k in range(len(self.r_grid)):
            yield (
                float(self.r_grid[k]), float(self.m[k]), int(self.n[k]),
                float(self.N[k]), float(self.Nbar[k]), float(self.T[k]),
            )

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["r", "m", "n", "N", "Nbar", "T"])
        for row in self.rows():
            w.writerow([repr(v) if isinstance(v, float) else v for v in row])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "order_estimate": self.order_estimate,
            "hyperorder_estimate": self.hyperorder_estimate,
            "hyperorder_unreliable": self.hyperorder_unreliable,
            "deficiency_estimate": self.deficiency_estimate,
            "target_b": [self.target.real, self.target.imag],
            "grid": [float(r) for r in self.r_grid],
            "Nbar_over_T": [float(a / t) if t else None for a, t in zip(self.Nbar, self.T)],
            "notes": list(self.notes),
        }


def characteristic_profile(f, b=0, r_grid=None, with_zeros: bool = True) -> CharProfile:
    """m, n, N, N-bar and T over a radius grid, plus order and deficiency estimates.

    For entire f the characteristic is T = m.  With ``with_zeros=False``
    the counting columns are left as NaN and only growth is estimated.
    """
    f = expoly(f)
    if not f.is_entire():
        raise MalmquistError("characteristic_profile expects an entire function")
    grid = np.asarray(geometric_grid() if r_grid is None else r_grid, float)
    if grid.ndim != 1 or len(grid) < 8 or np.any(np.diff(grid) <= 0) or grid[0] <= 0:
        raise ValueError("grid must be ascending, positive, with at least 8 points")
    b = complex(b)
    m = np.array([proximity(f, r) for r in grid])
    T = m.copy()
    notes = []
    zs = None
    if with_zeros:
        zs = locate_zeros(f, b, float(grid[-1]))
        counts = [counting_from_zeros(zs.zeros, r) for r in grid]
        n = np.array([c[0] for c in counts])
        N = np.array([c[1] for c in counts])
        Nbar = np.array([counting_from_zeros(zs.zeros, r, distinct=True)[1] for r in grid])
    else:
        n = np.full(len(grid), -1)
        N = np.full(len(grid), np.nan)
        Nbar = np.full(len(grid), np.nan)
    if np.any(np.diff(T) < -1e-6 * np.abs(T[1:])):
        notes.append("T not monotone within quadrature tolerance")
    top = slice(len(grid) // 2, None)
    lr = np.log(grid[top])
    with np.errstate(divide="ignore", invalid="ignore"):
        order = _slope(lr, np.log(T[top]))
        hyper = _slope(lr, np.log(np.log(T[top])))
    deficiency = float(1.0 - Nbar[-1] / T[-1]) if with_zeros and T[-1] > 0 else float("nan")
    return CharProfile(grid, m, n, N, Nbar, T, b, order, hyper, deficiency, zs, True, notes)


# -- lemma checks ---------------------------------------------------------------------------------


@dataclass
class RatioCurve:
    r_grid: np.ndarray
    values: np.ndarray
    numerator: np.ndarray
    denominator: np.ndarray
    asymptote: float | None = None

    def at(self, r: float) -> float:
        k = int(np.argmin(np.abs(self.r_grid - r)))
        return float(self.values[k])

    def to_dict(self) -> dict:
        return {
            "r": [float(x) for x in self.r_grid],
            "ratio": [float(x) for x in self.values],
            "numerator": [float(x) for x in self.numerator],
            "denominator": [float(x) for x in self.denominator],
            "asymptote": self.asymptote,
        }


def _cleared(R: WRational) -> tuple[WPoly, WPoly]:
    """P, Q multiplied by the common denominator of their coefficients."""
    den = None
    for c in R.P.coeffs + R.Q.coeffs:
        if den is None:
            den = c.den
        else:
            g = poly_gcd(den, c.den)
            den = (den * c.den).divmod(g)[0]
    D = RatFun(den)
    return R.P.scale(D), R.Q.scale(D)


def _pole_orders(num: ExpoPoly, den: ExpoPoly, R: float):
    """Poles of num/den in |z| <= R: zeros of den not cancelled by zeros of num."""
    zs = locate_zeros(den, 0, R)
    pnum = _Pair(num, 0) if not num.is_identically_zero() else None
    out = []
    pts = [z for z, _ in zs.zeros]
    for z, mult in zs.zeros:
        k = 0
        if pnum is not None:
            rho = 1e-3 * max(1.0, abs(z))
            others = [abs(z - w) for w in pts if w != z]
            if others:
                rho = min(rho, 0.4 * min(others))
            got = _circle_count(pnum, rho, center=z)
            if got is None:
                raise ConvergenceError(f"could not compare numerator zeros near {z}")
            k = got[0]
        if mult > k:
            out.append((z, mult - k))
    return out


def characteristic(f, r_grid) -> np.ndarray:
    """T(r, f) for an ExpoPoly or ExpoRational on a grid."""
    grid = np.asarray(r_grid, float)
    if isinstance(f, ExpoRational):
        poles = _pole_orders(f.num, f.den, float(grid[-1]))
        return np.array([proximity(f, r) + counting_from_zeros(poles, r)[1] for r in grid])
    return np.array([proximity(f, r) for r in grid])


def valiron_mohonko_check(R: WRational, w, r_grid) -> RatioCurve:
    """T(r, R(z, w(z))) / T(r, w) with the predicted limit max(deg_w P, deg_w Q)."""
    w = expoly(w)
    if not w.is_transcendental():
        raise MalmquistError("w must be transcendental")
    if not w.is_entire():
        raise MalmquistError("w must be entire")
    grid = np.asarray(r_grid, float)
    P, Q = _cleared(R)
    comp = ExpoRational(P.at(w), Q.at(w))
    top = characteristic(comp, grid)
    bottom = characteristic(w, grid)
    return RatioCurve(grid, top / bottom, top, bottom, float(R.degree))


def log_diff_lemma_check(w, c, r_grid) -> RatioCurve:
    """m(r, w(z+c)/w(z)) / T(r, w) on a grid."""
    w = expoly(w)
    if not w.is_transcendental():
        raise MalmquistError("w must be transcendental")
    grid = np.asarray(r_grid, float)
    q = ExpoRational(w.shift(c), w)
    top = np.array([proximity(q, r) for r in grid])
    bottom = characteristic(w, grid)
    return RatioCurve(grid, top / bottom, top, bottom, 0.0)


__all__ = [
    "CharProfile",
    "CircleCount",
    "RatioCurve",
    "ZeroSet",
    "characteristic",
    "characteristic_profile",
    "count_zeros",
    "count_zeros_detail",
    "counting_from_zeros",
    "counting_oracle",
    "geometric_grid",
    "jensen_counting",
    "locate_zeros",
    "log_diff_lemma_check",
    "mean_log_modulus",
    "origin_multiplicity",
    "proximity",
    "valiron_mohonko_check",
]
