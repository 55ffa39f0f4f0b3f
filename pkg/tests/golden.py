"""Golden equations with known entire solutions, in the script language.

Each entry is keyed by its solution.  All but ``periodic_plus_z`` hold for
any rational a(z) and are instantiated at the samples in ``A_SAMPLES``;
``periodic_plus_z`` needs a = -1/(pi*i).
"""

from malmquist_lab.frontend import parse

A_SAMPLES = ("z", "z+1", "(z^2+1)/z")

_GOLDEN = {
    "z_exp": dict(
        rhs="(exp(1)*(z+1) - exp(-1)*(z-1))/z*w + a*(1+z)/z",
        sol="z*exp(z)",
        H="z", d="1", r="0",
        form="linear",
        coeffs={"a1": "(exp(1)*(z+1) - exp(-1)*(z-1))/z", "a0": "a*(1+z)/z"},
    ),
    "periodic": dict(
        rhs="2*pi*i*a",
        sol="exp(2*pi*i*z)",
        H="1", d="2*pi*i", r="0",
        form="linear",
        coeffs={"a1": "0", "a0": "2*pi*i*a"},
    ),
    "exp_plus_z": dict(
        rhs="((exp(1)-exp(-1))*w^2 + (-z*(exp(1)-exp(-1)) + 2 + a)*w + a*(1-z))/w",
        sol="exp(z)+z",
        H="1", d="1", r="z",
        form="divided-quadratic",
        coeffs={"a2": "exp(1)-exp(-1)", "a1": "-z*(exp(1)-exp(-1)) + 2 + a", "a0": "a*(1-z)"},
    ),
    "periodic_plus_one": dict(
        rhs="(2*pi*i*a*w - 2*pi*i*a)/w",
        sol="exp(2*pi*i*z)+1",
        H="1", d="2*pi*i", r="1",
        form="divided-quadratic",
        coeffs={"a2": "0", "a1": "2*pi*i*a", "a0": "-2*pi*i*a"},
    ),
    "periodic_plus_z": dict(
        rhs="(2*z - 1/(pi*i))/w",
        sol="exp(2*pi*i*z)+z",
        H="1", d="2*pi*i", r="z",
        form="divided-quadratic",
        coeffs={"a2": "0", "a1": "0", "a0": "2*z - 1/(pi*i)"},
    ),
}

FIXED_A = "-1/(pi*i)"
LINEAR = ("z_exp", "periodic")


def cases():
    """(label, key, a-text) for every instantiated equation."""
    out = []
    for key in _GOLDEN:
        if key == "periodic_plus_z":
            out.append((key, key, FIXED_A))
        else:
            out += [(f"{key}[a={a}]", key, a) for a in A_SAMPLES]
    return out


def script_text(n: str, a: str, *keys: str) -> str:
    ex = _GOLDEN[n]
    lines = [f"a := {a}"] + [f"{k} := {ex[k]}" for k in keys]
    return "\n".join(lines)


def script(n: str, a: str, *keys: str):
    return parse(script_text(n, a, *keys))


def expected_form(n: str, a: str):
    ex = _GOLDEN[n]
    s = parse("\n".join([f"a := {a}"] + [f"{k} := {v}" for k, v in ex["coeffs"].items()]))
    return ex["form"], {k: s.ratfun(k) for k in ex["coeffs"]}
