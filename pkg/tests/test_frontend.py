import json
import subprocess
import sys

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import golden
from corpus import constants, expolys, ratfuns
from malmquist_lab.constfield import I, PI
from malmquist_lab.ddeq import WPoly, WRational
from malmquist_lab.expoly import ExpoPoly
from malmquist_lab.frontend import (
    SCHEMA,
    Flags,
    ParseError,
    main,
    parse,
    parse_const,
    parse_expoly,
    parse_ratfun,
    parse_value,
    parse_wrational,
    run,
)
from malmquist_lab.ratfun import RatFun

z = RatFun.z()


# -- parser ------------------------------------------------------------------

def test_parse_examples():
    assert parse_expoly("z*exp(1*z)") == ExpoPoly.term(z, 1)
    assert parse_expoly("exp(2*pi*i*z)+z") == ExpoPoly.exp(2 * PI * I) + ExpoPoly.term(z)


def test_zero_denominator_has_span():
    with pytest.raises(ParseError) as exc:
        parse_value("1/(0)")
    assert exc.value.reason == "zero denominator"
    assert (exc.value.span.line, exc.value.span.col) == (1, 2)


def test_certified_zero_denominator_detected():
    with pytest.raises(ParseError, match="zero denominator"):
        parse_value("1/(exp(2*pi*i)-1)")


def test_error_spans_point_at_the_problem():
    with pytest.raises(ParseError) as exc:
        parse("a := z\nb := z $ 1")
    assert exc.value.span.line == 2 and exc.value.span.col == 8
    with pytest.raises(ParseError, match="unresolved name"):
        parse("a := q + 1")
    with pytest.raises(ParseError, match="reserved"):
        parse("pi := 3")
    with pytest.raises(ParseError, match="duplicate"):
        parse("a := 1; a := 2")
    with pytest.raises(ParseError, match="mix"):
        parse_value("w + exp(z)")


def test_names_resolve_in_order():
    s = parse("a := z+1\nb := a^2 # comment\nc := b/a")
    assert s.ratfun("c") == z + 1
    assert s.order == ["a", "b", "c"]


def test_unicode_and_power_aliases():
    assert parse_ratfun("z**2 − 1") == parse_ratfun("z^2 - 1")
    assert parse_ratfun("2×z") == 2 * z


def test_constants():
    assert parse_const("exp(2*pi*i)") == parse_const("1")
    assert parse_const("2^-1") == parse_const("1/2")
    assert parse_const("-i/pi") == -I / PI


def test_equation_grammar():
    s = parse("a := z; rhs := (2*pi*i*a*w - 2*pi*i*a)/w")
    R = s.wrational("rhs")
    assert R.Q == WPoly.w()
    with pytest.raises(ParseError):
        s.expoly("rhs")
    with pytest.raises(ParseError, match="missing"):
        s.ratfun("nothing")


@given(constants)
def test_constant_round_trip(c):
    assert parse_const(str(c)) == c


@given(ratfuns())
def test_ratfun_round_trip(f):
    assert parse_ratfun(str(f)) == f


@settings(max_examples=30)
@given(expolys())
def test_expoly_round_trip(f):
    assert parse_expoly(str(f)) == f


@pytest.mark.parametrize("label,n,a", golden.cases())
def test_wrational_round_trip(label, n, a):
    R = golden.script(n, a, "rhs").wrational("rhs")
    assert parse_wrational(str(R)) == R


# -- commands ----------------------------------------------------------------

def test_verify_periodic():
    rep = run("verify", golden.script("periodic", "z", "rhs", "sol"))
    assert rep.exit_code == 0 and rep.result["verdict"] is True
    assert rep.result["numeric_gap"] < 1e-9


def test_synthesize_negative():
    rep = run("synthesize", parse("a := z; a1 := 5; a0 := z"))
    assert rep.exit_code == 1 and rep.result["found"] is False


def test_classify_not_reduced():
    rep = run("classify", parse("a := z; rhs := (w^2+1)/(w^2-1)"))
    assert rep.exit_code == 1 and rep.result["form"] == "not-reduced"


def test_invert_command():
    rep = run("invert", parse("H := 1; d := 2*pi*i; r := 1; a := z"))
    assert rep.exit_code == 0 and rep.result["form"] == "divided-quadratic"
    assert parse_wrational(rep.result["rhs"]) == parse_wrational("(2*pi*i*z*w - 2*pi*i*z)/w")


def test_errors_exit_two():
    assert run("verify", parse("a := z; rhs := w")).exit_code == 2
    rep = run("invert", parse("H := 1/z; d := 1; a := z"))
    assert rep.exit_code == 2 and rep.result["kind"] == "input"
    with pytest.raises(ValueError):
        run("dance", parse("a := 1"))


def test_undecidable_exit_two():
    # cyclotomic relation the constant field cannot settle
    u = "exp(i*pi/5)"
    script = parse(f"a := z; a1 := {u}^4 - {u}^3 + {u}^2 - {u} + 1 + 2*i; a0 := z")
    rep = run("synthesize", script)
    assert rep.exit_code == 2 and rep.result["kind"] == "undecidable"
    assert rep.result["bits"] == 1024
    rep = run("synthesize", script, Flags(precision=128))
    assert rep.result["bits"] == 128


def test_nevan_command(tmp_path):
    csv_path = tmp_path / "p.csv"
    code = main(["nevan", "-e", "f := exp(z)+z; b := 0", "--grid", "10:40:8", "--csv", str(csv_path), "--out", str(tmp_path / "r.json")])
    assert code == 0
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["schema"] == SCHEMA and len(doc["result"]["rows"]) == 8
    assert csv_path.read_text().splitlines()[0] == "r,m,n,N,Nbar,T"


def test_check_lemma_commands():
    rep = run("check-lemma", parse("rhs := w^2; sol := exp(z)"), Flags(grid=(10.0, 100.0, 8)))
    assert rep.exit_code == 0 and rep.result["asymptote"] == 2
    rep = run("check-lemma", parse("sol := exp(z)+z; c := 1"), Flags(grid=(10.0, 100.0, 8), lemma="log-difference"))
    assert rep.exit_code == 0 and rep.result["verdict"] is True


def test_bad_grid_flag(capsys):
    with pytest.raises(SystemExit):
        main(["nevan", "-e", "f := exp(z)", "--grid", "10:5:8"])


def test_exit_codes_on_golden_corpus(capsys):
    for label, n, a in golden.cases():
        text = golden.script_text(n, a, "rhs", "sol")
        assert main(["verify", "-e", text]) == 0, label
        assert main(["classify", "-e", text]) == 0, label
        assert main(["invert", "-e", golden.script_text(n, a, "H", "d", "r")]) == 0, label
    assert main(["verify", "-e", golden.script_text("periodic_plus_z", golden.FIXED_A, "rhs") + "\nsol := exp(z)"]) == 1
    assert main(["verify", "-e", "a := 1/(0)"]) == 2


def _doc(args, capsys):
    main(args)
    doc = json.loads(capsys.readouterr().out)
    doc.pop("timing")
    return json.dumps(doc, sort_keys=True)


def test_reports_are_deterministic(capsys):
    for args in (
        ["synthesize", "-e", "a := z; a1 := 2*i; a0 := 1 + pi*i/2*z"],
        ["verify", "-e", golden.script_text("exp_plus_z", "z+1", "rhs", "sol"), "--seed", "7"],
        ["nevan", "-e", "f := exp(2*pi*i*z)+z", "--grid", "10:30:8"],
    ):
        assert _doc(args, capsys) == _doc(args, capsys)


def test_module_entry_point(tmp_path):
    src = tmp_path / "periodic.txt"
    src.write_text(golden.script_text("periodic_plus_one", "z", "rhs", "sol"))
    out = subprocess.run([sys.executable, "-m", "malmquist_lab", "verify", str(src)], capture_output=True, text=True)
    assert out.returncode == 0
    assert json.loads(out.stdout)["result"]["verdict"] is True
