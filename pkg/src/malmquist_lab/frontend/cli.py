"""Command-line front end: ``python -m malmquist_lab <command> [script] [flags]``.

Every command reads a script of definitions and prints a JSON report.
Exit status is 0 for a positive verdict, 1 for a negative one and 2 for
errors, including undecidable zero tests.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import dataclass, field

import numpy as np

from ..constfield import precision
from ..ddeq import DelayEquation, DividedQuadratic, Linear, classify, entire_obstruction, invert, lhs, substitute, verify_solution
from ..errors import MalmquistError, UndecidableError
from ..nevanlinna import characteristic_profile, geometric_grid, log_diff_lemma_check, valiron_mohonko_check
from ..synthesis import explain, solve_linear_form
from .parser import ParseError, Script, parse

SCHEMA = "malmquist-lab/1"
COMMANDS = ("verify", "classify", "invert", "synthesize", "nevan", "check-lemma")
LEMMAS = ("valiron-mohonko", "log-difference")


@dataclass
class Flags:
    grid: tuple = (10.0, 1000.0, 24)
    precision: int = 1024
    seed: int = 0
    csv: str | None = None
    zeros: bool = True
    lemma: str = "valiron-mohonko"


@dataclass
class Report:
    command: str
    inputs: dict = field(default_factory=dict)
    result: dict = field(default_factory=dict)
    exit_code: int = 0
    seconds: float = 0.0
    csv: str | None = None

    def document(self, timing: bool = True) -> dict:
        doc = {"schema": SCHEMA, "command": self.command, "inputs": self.inputs, "result": self.result, "exit_code": self.exit_code}
        if timing:
            doc["timing"] = {"seconds": round(self.seconds, 6)}
        return _clean(doc)

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.document(timing), sort_keys=True, indent=2, allow_nan=False)


def _clean(x):
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else None
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, complex):
        return [_clean(x.real), _clean(x.imag)]
    return x


def _grid(flags: Flags) -> np.ndarray:
    rmin, rmax, pts = flags.grid
    return geometric_grid(rmin, rmax, int(pts))


def _equation(s: Script) -> DelayEquation:
    return DelayEquation(s.ratfun("a"), s.wrational("rhs"))


def _form_dict(form) -> dict:
    if isinstance(form, Linear):
        return {"form": form.name, "a1": str(form.a1), "a0": str(form.a0)}
    if isinstance(form, DividedQuadratic):
        return {"form": form.name, "a2": str(form.a2), "a1": str(form.a1), "a0": str(form.a0)}
    return {"form": form.name, "reason": form.reason}


def _numeric_spot_check(eq: DelayEquation, w, seed: int, points: int = 5) -> float:
    """Largest relative gap between the two sides at random points, for the report only."""
    rng = np.random.default_rng(seed)
    zs = rng.uniform(-2, 2, points) + 1j * rng.uniform(-2, 2, points)
    left = lhs(eq, w).evaluate(zs)
    right = substitute(eq.rhs, w).evaluate(zs)
    return float(np.max(np.abs(left - right) / np.maximum(1.0, np.abs(right))))


def _verify(s: Script, flags: Flags, rep: Report):
    eq = _equation(s)
    w = s.expoly("sol")
    rep.inputs = {"a": str(eq.a), "rhs": str(eq.rhs), "sol": str(w)}
    ok = verify_solution(eq, w)
    rep.result = {"verdict": ok, "numeric_gap": _numeric_spot_check(eq, w, flags.seed), "seed": flags.seed}
    rep.exit_code = 0 if ok else 1


def _classify(s: Script, flags: Flags, rep: Report):
    eq = _equation(s)
    rep.inputs = {"a": str(eq.a), "rhs": str(eq.rhs)}
    form = classify(eq)
    rep.result = dict(_form_dict(form), deg_w=eq.rhs.degree, obstruction=entire_obstruction(eq))
    rep.exit_code = 1 if form.name == "not-reduced" else 0


def _invert(s: Script, flags: Flags, rep: Report):
    H = s.ratfun("H")
    if not H.is_polynomial():
        raise ParseError("H must be a polynomial", s.spans.get("H"))
    d, r, a = s.constant("d"), s.ratfun("r", 0), s.ratfun("a")
    rep.inputs = {"H": str(H), "d": str(d), "r": str(r), "a": str(a)}
    eq = invert(H.num, d, r, a)
    rep.result = dict(equation=str(eq), a=str(eq.a), rhs=str(eq.rhs), **_form_dict(classify(eq)))


def _synthesize(s: Script, flags: Flags, rep: Report):
    a, a1, a0 = s.ratfun("a"), s.ratfun("a1"), s.ratfun("a0")
    rep.inputs = {"a": str(a), "a1": str(a1), "a0": str(a0)}
    fam = solve_linear_form(a, a1, a0)
    rep.result = explain(a, a1, a0, fam)
    rep.exit_code = 0 if fam.found else 1


def _nevan(s: Script, flags: Flags, rep: Report):
    f = s.expoly("f")
    b = s.complex("b", 0)
    rep.inputs = {"f": str(f), "b": b, "grid": list(flags.grid)}
    prof = characteristic_profile(f, b, _grid(flags), with_zeros=flags.zeros)
    rep.result = prof.summary()
    rep.result["rows"] = [list(row) for row in prof.rows()]
    rep.csv = prof.to_csv()


def _check_lemma(s: Script, flags: Flags, rep: Report):
    grid = _grid(flags)
    if flags.lemma == "valiron-mohonko":
        R, w = s.wrational("rhs"), s.expoly("sol")
        rep.inputs = {"lemma": flags.lemma, "rhs": str(R), "sol": str(w), "grid": list(flags.grid)}
        curve = valiron_mohonko_check(R, w, grid)
        last = curve.values[-1]
        ok = abs(last - curve.asymptote) <= 0.1 * curve.asymptote
    else:
        w, c = s.expoly("sol"), s.constant("c", 1)
        rep.inputs = {"lemma": flags.lemma, "sol": str(w), "c": str(c), "grid": list(flags.grid)}
        curve = log_diff_lemma_check(w, c, grid)
        ok = curve.values[-1] <= 0.05
    rep.result = dict(curve.to_dict(), verdict=bool(ok))
    rep.exit_code = 0 if ok else 1


_DISPATCH = {
    "verify": _verify,
    "classify": _classify,
    "invert": _invert,
    "synthesize": _synthesize,
    "nevan": _nevan,
    "check-lemma": _check_lemma,
}


def run(command: str, script: Script, flags: Flags | None = None) -> Report:
    """Execute one command; errors become exit code 2 with a message in the report."""
    if command not in _DISPATCH:
        raise ValueError(f"unknown command {command!r}")
    flags = flags or Flags()
    rep = Report(command)
    t0 = time.perf_counter()
    try:
        with precision(flags.precision):
            _DISPATCH[command](script, flags, rep)
    except UndecidableError as exc:
        rep.exit_code = 2
        rep.result = {"error": str(exc), "kind": "undecidable", "subject": None if exc.subject is None else str(exc.subject), "bits": exc.bits}
    except ParseError as exc:
        rep.exit_code = 2
        rep.result = {"error": str(exc), "kind": "input"}
    except (MalmquistError, ValueError, ZeroDivisionError) as exc:
        rep.exit_code = 2
        rep.result = {"error": str(exc), "kind": type(exc).__name__}
    rep.seconds = time.perf_counter() - t0
    return rep


def _parse_grid(text: str) -> tuple:
    try:
        lo, hi, n = text.split(":")
        grid = (float(lo), float(hi), int(n))
    except ValueError:
        raise argparse.ArgumentTypeError("grid must look like rmin:rmax:points") from None
    if not (0 < grid[0] < grid[1]) or grid[2] < 8:
        raise argparse.ArgumentTypeError("need 0 < rmin < rmax and at least 8 points")
    return grid


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="malmquist-lab", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("source", nargs="?", help="script file, or - for stdin")
        p.add_argument("-e", "--expr", help="inline script text")
        p.add_argument("--grid", type=_parse_grid, default=(10.0, 1000.0, 24), help="rmin:rmax:points (geometric)")
        p.add_argument("--precision", type=int, default=1024, help="interval bits cap for zero tests")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", help="write the JSON report here instead of stdout")
        p.add_argument("--csv", help="write the profile table here (nevan)")
        if name == "nevan":
            p.add_argument("--no-zeros", action="store_true", help="skip zero location; growth only")
        if name == "check-lemma":
            p.add_argument("--lemma", choices=LEMMAS, default="valiron-mohonko")
    return ap


def _read_source(args) -> str:
    if args.expr is not None:
        return args.expr
    if args.source in (None, "-"):
        return sys.stdin.read()
    with open(args.source, encoding="utf-8") as fh:
        return fh.read()


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    flags = Flags(
        grid=args.grid,
        precision=args.precision,
        seed=args.seed,
        csv=args.csv,
        zeros=not getattr(args, "no_zeros", False),
        lemma=getattr(args, "lemma", "valiron-mohonko"),
    )
    try:
        script = parse(_read_source(args))
    except (ParseError, OSError) as exc:
        rep = Report(args.command, exit_code=2, result={"error": str(exc), "kind": "input"})
    else:
        rep = run(args.command, script, flags)
    text = rep.to_json()
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    if args.csv and rep.csv is not None:
        with open(args.csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(rep.csv)
    return rep.exit_code
