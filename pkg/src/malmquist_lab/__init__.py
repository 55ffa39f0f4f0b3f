"""Exact and numerical tools for the delay differential equation

    w(z+1) - w(z-1) + a(z) w'(z)/w(z) = R(z, w(z))

and its entire solutions of the form H(z) exp(dz) + r(z).
"""

from .constfield import E, I, ONE, PI, ZERO, ConstExpr, ZeroVerdict, cexp, const, eval_interval, is_zero, precision
from .ddeq import (
    DelayEquation,
    DividedQuadratic,
    Linear,
    NotReduced,
    WPoly,
    WRational,
    classify,
    entire_obstruction,
    invert,
    normalize_rhs,
    substitute,
    verify_solution,
)
from .errors import ConstZeroDivisionError, ConvergenceError, IntervalPrecisionError, MalmquistError, UndecidableError
from .expoly import ExpoPoly, ExpoRational
from .ratfun import Poly, RatFun, log_derivative, solve_poly_logderiv
from .synthesis import SolutionFamily, explain, solve_linear_form

__version__ = "0.1.0"

__all__ = [
    "E", "I", "ONE", "PI", "ZERO", "ConstExpr", "ZeroVerdict", "cexp", "const", "eval_interval", "is_zero", "precision",
    "DelayEquation", "DividedQuadratic", "Linear", "NotReduced", "WPoly", "WRational", "classify",
    "entire_obstruction", "invert", "normalize_rhs", "substitute", "verify_solution",
    "ConstZeroDivisionError", "ConvergenceError", "IntervalPrecisionError", "MalmquistError", "UndecidableError",
    "ExpoPoly", "ExpoRational", "Poly", "RatFun", "log_derivative", "solve_poly_logderiv",
    "SolutionFamily", "explain", "solve_linear_form",
]
