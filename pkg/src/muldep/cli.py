"""Command-line front end: one subcommand per operation, JSON on stdout.

Exit codes: 0 success, 2 invalid input, 3 failed hypothesis (no
``--override``), 4 resource cap.  Errors are JSON objects on stderr.
Every flag may also come from a JSON file given with ``--config``; its
keys are the flag names with dashes replaced by underscores.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .exactnum import (
    DEFAULT_ENUM_CAP,
    PlaceSet,
    ResourceError,
    count_bounded_height,
    enumerate_bounded_height,
    format_rational,
    height,
    p_s_q_s,
    parse_bound,
    s_norm,
    to_fraction,
)

EXIT_OK, EXIT_INPUT, EXIT_HYPOTHESIS, EXIT_RESOURCE = 0, 2, 3, 4


class InputError(ValueError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


# -- value parsing -----------------------------------------------------------


def _items(value) -> list:
    if value is None:
        return []
    if isinstance(value, (list, tuple)):
        return list(value)
    text = str(value).strip()
    return [t for t in (s.strip() for s in text.split(",")) if t]


def _rational(value) -> Fraction:
    try:
        return to_fraction(value if not isinstance(value, str) else value.strip())
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"not an exact rational: {value!r}") from exc


def _rationals(value) -> list[Fraction]:
    return [_rational(v) for v in _items(value)]


def _poly(value):
    from .polyrat import Poly

    coeffs = _rationals(value)
    if not coeffs:
        raise InputError("empty coefficient list")
    return Poly(coeffs)


def _rf(value):
    """A polynomial, or numerator:denominator coefficient lists."""
    if isinstance(value, dict):
        return _poly(value["num"]), _poly(value.get("den", [1]))
    if isinstance(value, str) and ":" in value:
        num, den = value.split(":", 1)
        return _poly(num), _poly(den)
    return _poly(value)


def _gamma(value):
    from .mulrel import GroupSpec

    gens = _rationals(value)
    if any(g == 0 for g in gens):
        raise InputError("Gamma generators must be nonzero")
    return GroupSpec(tuple(gens))


def _places(value) -> PlaceSet:
    try:
        return PlaceSet(tuple(int(str(p)) for p in _items(value) if str(p) not in ("inf", "oo")))
    except ValueError as exc:
        raise InputError(str(exc)) from exc


def _bound(value, name, notes):
    try:
        b, exact = parse_bound(value)
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{name}: cannot parse bound {value!r}") from exc
    if float(b) < 0:
        raise InputError(f"{name} must be nonnegative")
    if not exact:
        notes.append(f"{name} parsed inexactly as the float {float(b)!r}")
    return b


def _int(value, name, lo=None):
    try:
        v = int(str(value))
    except ValueError as exc:
        raise InputError(f"{name} must be an integer") from exc
    if lo is not None and v < lo:
        raise InputError(f"{name} must be at least {lo}")
    return v


# -- commands ------------------------------------------------------------------


def cmd_height(a, notes):
    x = _rational(a.x)
    if x == 0:
        raise InputError("height of zero is undefined")
    h = height(x)
    return {"x": format_rational(x), "height": repr(h.value), "exp_height": h.integer}


def cmd_snorm(a, notes):
    b = _rational(a.b)
    S = _places(a.S)
    if b == 0:
        raise InputError("S-norm of zero is undefined")
    P, Q = p_s_q_s(S)
    return {
        "b": format_rational(b),
        "S": ["inf", *S.finite_primes],
        "s_norm": format_rational(s_norm(b, S)),
        "P_S": P,
        "Q_S": Q,
        "is_s_unit": S.is_s_unit(b),
        "is_s_integer": S.is_s_integer(b),
    }


def cmd_enum(a, notes):
    H = _bound(a.H, "H", notes)
    if a.count_only:
        return {"H": str(H), "count": count_bounded_height(H)}
    vals = enumerate_bounded_height(H, cap=_int(a.enum_cap, "enum_cap", 1))
    return {"H": str(H), "count": len(vals), "elements": [format_rational(v) for v in vals]}


def cmd_polyinfo(a, notes):
    from . import polyrat as pr

    f = _poly(a.f)
    if f.is_zero():
        raise InputError("zero polynomial")
    h, hh = pr.poly_heights(f)
    out = {
        "f": f.to_json(),
        "pretty": f.pretty(),
        "degree": f.degree,
        "height": repr(h.value),
        "height_hom": repr(hh.value),
        "bad_reduction_primes": sorted(pr.bad_reduction_primes(f)),
    }
    if f.degree >= 1:
        sq = pr.squarefree_decompose(f)
        out["squarefree"] = {
            "unit": format_rational(sq.unit),
            "parts": [{"poly": p.to_json(), "multiplicity": e} for p, e in sq.parts],
        }
        out["radical"] = pr.radical(f).to_json()
        out["distinct_roots"] = pr.distinct_root_count(f)
        out["discriminant"] = format_rational(pr.discriminant(f))
    if a.g is not None:
        g = _poly(a.g)
        out["resultant"] = format_rational(pr.resultant(f, g))
    return out


def cmd_deptest(a, notes):
    from .mulrel import dependence_absolute

    alphas = _nonzero(a.alphas)
    w = dependence_absolute(alphas)
    return {"dependent": w is not None, "k": None if w is None else list(w.k)}


def _nonzero(value):
    xs = _rationals(value)
    if not xs:
        raise InputError("need at least one number")
    if any(x == 0 for x in xs):
        raise InputError("numbers must be nonzero")
    return xs


def cmd_gmember(a, notes):
    from .mulrel import gamma_membership

    x = _nonzero(a.x)[0]
    c = gamma_membership(x, _gamma(a.gamma))
    return {"member": c is not None, "gamma_exponents": None if c is None else list(c)}


def cmd_gdivmember(a, notes):
    from .mulrel import gamma_div_membership

    return gamma_div_membership(_nonzero(a.x)[0], _gamma(a.gamma)).to_json()


def cmd_epsmember(a, notes):
    from .mulrel import eps_membership_sandwich

    eps = _bound(a.eps, "eps", notes)
    return eps_membership_sandwich(_nonzero(a.x)[0], _gamma(a.gamma), eps).to_json()


def cmd_depgamma(a, notes):
    from .mulrel import dependence_mod_gamma_div, dependence_mod_gamma_eps

    alphas = _nonzero(a.alphas)
    gamma = _gamma(a.gamma)
    if a.eps is None:
        w = dependence_mod_gamma_div(alphas, gamma)
        return {"dependent": w is not None, "witness": None if w is None else w.to_json()}
    return dependence_mod_gamma_eps(alphas, gamma, _bound(a.eps, "eps", notes)).to_json()


def cmd_rfindep(a, notes):
    from .mulrel import rf_independence_mod_gamma

    fs = [_rf(v) for v in (a.f or [])]
    if not fs:
        raise InputError("need at least one --f")
    w = rf_independence_mod_gamma(fs, _gamma(a.gamma))
    return {"independent": w is None, "witness": None if w is None else w.to_json()}


def cmd_lfcheck(a, notes):
    from .mulrel import lf_generation_check

    r = lf_generation_check(_poly(a.f1), _poly(a.f2))
    return {"generates": r is not None, "relation": None if r is None else r.to_json()}


def cmd_stbound(a, notes):
    from .stbound import BoundInputs, compute_constants

    prec = _int(a.prec, "prec", 16) if a.prec is not None else None
    inp = BoundInputs(
        _int(a.n, "n"),
        _int(a.s, "s"),
        _int(a.d, "d"),
        _real_text(a.hf),
        _real_text(a.disc),
        _real_text(a.ps),
        _real_text(a.nsb),
    )
    return compute_constants(inp, prec).to_json()


def _real_text(value):
    try:
        return Fraction(str(value))
    except ValueError:
        b, _ = _bound(value, "value", [])
        return b


def _search_args(a, notes):
    from .polyrat import Poly  # noqa: F401

    f = _poly(a.f)
    b = _rational(a.b)
    S = _places(a.S)
    H = _bound(a.H, "H", notes)
    return f, b, S, H, _int(a.m_max, "m_max", 1)


def cmd_hsearch(a, notes):
    from .expsearch import hyperelliptic_search

    f, b, S, H, m_max = _search_args(a, notes)
    skipped = []
    sols = hyperelliptic_search(f, b, S, H, m_max, reduce_powers=not a.all_powers, skipped=skipped)
    return {
        "solutions": [{"x": format_rational(x), "y": format_rational(y), "m": m} for x, y, m in sols],
        "skipped": [{"x": format_rational(x), "reason": r} for x, r in skipped],
    }


def cmd_validate(a, notes):
    from .expsearch import validate_bound

    f, b, S, H, m_max = _search_args(a, notes)
    prec = _int(a.prec, "prec", 16) if a.prec is not None else None
    return validate_bound(f, b, S, H, m_max, prec)


def cmd_sets(a, notes):
    from .expsearch import InstanceSpec, diophantine_exponent_basis, s_f_gamma_eps, s_gamma

    gamma = _gamma(a.gamma)
    polys = [_poly(v) for v in (a.f or [])]
    out = {"s_gamma": ["inf", *s_gamma(gamma).finite_primes]}
    if polys:
        inst = InstanceSpec(tuple(polys), gamma, _bound(a.eps, "eps", notes), 0)
        out["s_f_gamma_eps"] = s_f_gamma_eps(inst).to_json()
        if len(polys) >= 1:
            basis, F = diophantine_exponent_basis([p.degree for p in polys], polys)
            out["exponent_basis"] = basis
            out["F"] = None if F is None else {"num": F[0].to_json(), "den": F[1].to_json()}
    return out


def _scan_common(a, notes):
    return _gamma(a.gamma), _bound(a.eps, "eps", notes), _bound(a.H, "H", notes)


def cmd_scan12(a, notes):
    from .expsearch import InstanceSpec, scan_theorem12

    polys = [_poly(v) for v in (a.f or [])]
    if not polys:
        raise InputError("need at least one --f")
    gamma, eps, H = _scan_common(a, notes)
    return scan_theorem12(InstanceSpec(tuple(polys), gamma, eps, H), a.override, _workers(a))


def cmd_scan13(a, notes):
    from .expsearch import scan_corollary13

    gamma, eps, H = _scan_common(a, notes)
    return scan_corollary13(
        _poly(a.f),
        gamma,
        eps,
        _int(a.n, "n", 1),
        _int(a.m_max, "m_max", 0),
        H,
        a.override,
        _workers(a),
        float(a.height_cap),
    )


def cmd_scan15(a, notes):
    from .expsearch import scan_theorem15

    gamma, eps, H = _scan_common(a, notes)
    return scan_theorem15(_poly(a.f1), _poly(a.f2), gamma, eps, H, a.override, _workers(a))


def _workers(a):
    return _int(a.workers, "workers", 1)


# -- parser ----------------------------------------------------------------------

COMMANDS = {
    "height": (cmd_height, "Weil height h(x) = log max(|p|, |q|) of a nonzero rational p/q."),
    "snorm": (cmd_snorm, "S-norm N_S(b) of a rational b, with P_S and Q_S of the place set S."),
    "enum": (cmd_enum, "Enumerate A(Q, H), the nonzero rationals of Weil height at most H."),
    "polyinfo": (
        cmd_polyinfo,
        "Polynomial invariants: heights h(f) and h_hom(f), squarefree decomposition, "
        "radical f*, discriminant, bad-reduction primes, optional resultant Res(f, g).",
    ),
    "deptest": (cmd_deptest, "Multiplicative dependence: integer k != 0 with prod(alpha_i^k_i) = 1."),
    "gmember": (cmd_gmember, "Membership of x in a finitely generated group Gamma of rationals."),
    "gdivmember": (cmd_gdivmember, "Membership of x in the division group Gamma^div, with the least power m."),
    "epsmember": (
        cmd_epsmember,
        "Three-valued membership in the approximate division group Gamma^div_eps (IN / OUT / BOUNDARY).",
    ),
    "depgamma": (
        cmd_depgamma,
        "Multiplicative dependence modulo Gamma^div, or modulo Gamma^div_eps when --eps is given.",
    ),
    "rfindep": (
        cmd_rfindep,
        "Multiplicative independence of rational functions modulo Gamma (X, f_1, ..., f_n hypothesis).",
    ),
    "lfcheck": (
        cmd_lfcheck,
        "Whether f1, f2 multiplicatively generate a power of a linear fractional function.",
    ),
    "stbound": (
        cmd_stbound,
        "Explicit constants C0..C6, C and the exponent bound m <= 2 C log C for f(x) = b y^m "
        "(generalized Schinzel-Tijdeman bound), in log form.",
    ),
    "hsearch": (cmd_hsearch, "Search solutions of the superelliptic equation f(x) = b y^m in S-integers."),
    "validate": (
        cmd_validate,
        "Check every exponent found for f(x) = b y^m against the Schinzel-Tijdeman bound 2 C log C.",
    ),
    "sets": (
        cmd_sets,
        "Place sets S_Gamma and S_{f,Gamma,eps} with per-stage breakdown, and the degree-equation "
        "exponent basis.",
    ),
    "scan12": (
        cmd_scan12,
        "Scan alpha in A(Q, H) for f_1(alpha), ..., f_n(alpha) multiplicatively dependent modulo "
        "Gamma^div_eps (finiteness theorem for pairwise coprime polynomials).",
    ),
    "scan13": (
        cmd_scan13,
        "Scan iterate windows f^(m+1)(alpha), ..., f^(m+n)(alpha) for dependence modulo Gamma^div_eps "
        "(dynamical corollary; needs 0 not periodic).",
    ),
    "scan15": (
        cmd_scan15,
        "Scan alpha for f_1(alpha), f_2(alpha) multiplicatively dependent modulo Gamma^div_eps "
        "(two-polynomial theorem; excludes linear fractional powers).",
    ),
}


def _add_common(p, scan=False):
    p.add_argument("--config", help="JSON file with flag values (keys use underscores)")
    p.add_argument("--format", choices=["json", "csv"], default="json")
    p.add_argument("--seed", type=int, default=None, help="echoed into the report")
    if scan:
        p.add_argument("--override", action="store_true", help="run even if a hypothesis fails")
        p.add_argument("--workers", default=1, help="parallel workers (output is identical)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="muldep", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"muldep {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    ps = {}
    for name, (_, text) in COMMANDS.items():
        ps[name] = sub.add_parser(name, help=text, description=text)
        _add_common(ps[name], scan=name.startswith("scan"))
    ps["height"].add_argument("--x")
    ps["snorm"].add_argument("--b")
    ps["snorm"].add_argument("--S", default="", help="finite primes of S, comma separated")
    ps["enum"].add_argument("--H", help='height bound: decimal, or "log:N" for log N')
    ps["enum"].add_argument("--count-only", action="store_true")
    ps["enum"].add_argument("--enum-cap", default=DEFAULT_ENUM_CAP)
    ps["polyinfo"].add_argument("--f", help="coefficients, highest degree first")
    ps["polyinfo"].add_argument("--g", default=None, help="second polynomial for the resultant")
    ps["deptest"].add_argument("--alphas", help="comma separated rationals")
    for name in ("gmember", "gdivmember", "epsmember"):
        ps[name].add_argument("--x")
        ps[name].add_argument("--gamma", default="", help="generators of Gamma")
    ps["epsmember"].add_argument("--eps", default="0")
    ps["depgamma"].add_argument("--alphas")
    ps["depgamma"].add_argument("--gamma", default="")
    ps["depgamma"].add_argument("--eps", default=None)
    ps["rfindep"].add_argument("--f", action="append", help='polynomial or "num:den" coefficient lists')
    ps["rfindep"].add_argument("--gamma", default="")
    ps["lfcheck"].add_argument("--f1")
    ps["lfcheck"].add_argument("--f2")
    st = ps["stbound"]
    st.add_argument("--n")
    st.add_argument("--s")
    st.add_argument("--d", default=1)
    st.add_argument("--hf", default="0")
    st.add_argument("--disc", default="1")
    st.add_argument("--ps", default="1")
    st.add_argument("--nsb", default="1")
    st.add_argument("--prec", default=None, help="working precision in bits")
    for name in ("hsearch", "validate"):
        p = ps[name]
        p.add_argument("--f")
        p.add_argument("--b", default="1")
        p.add_argument("--S", default="")
        p.add_argument("--H")
        p.add_argument("--m-max", default=20)
    ps["hsearch"].add_argument("--all-powers", action="store_true", help="list every m, not only the largest")
    ps["validate"].add_argument("--prec", default=None)
    ps["sets"].add_argument("--f", action="append")
    ps["sets"].add_argument("--gamma", default="")
    ps["sets"].add_argument("--eps", default="0")
    for name in ("scan12", "scan13", "scan15"):
        ps[name].add_argument("--gamma", default="")
        ps[name].add_argument("--eps", default="0")
        ps[name].add_argument("--H")
    ps["scan12"].add_argument("--f", action="append", help="repeat once per polynomial")
    ps["scan13"].add_argument("--f")
    ps["scan13"].add_argument("--n", default=2, help="window length")
    ps["scan13"].add_argument("--m-max", default=3)
    ps["scan13"].add_argument("--height-cap", default=5000.0)
    ps["scan15"].add_argument("--f1")
    ps["scan15"].add_argument("--f2")
    parser._subparsers_map = ps
    return parser


def _load_config(path, sub: argparse.ArgumentParser) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise InputError("config must be a JSON object")
    known = {act.dest for act in sub._actions} - {"help", "config"}
    unknown = sorted(set(data) - known - {"command"})
    if unknown:
        raise InputError(f"unknown config fields: {', '.join(unknown)}")
    return {k: v for k, v in data.items() if k != "command"}


def _parse(argv):
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise InputError("missing subcommand; try --help")
    if args.config:
        sub = parser._subparsers_map[args.command]
        sub.set_defaults(**_load_config(args.config, sub))
        args = parser.parse_args(argv)
    return args


def _missing(args):
    required = {
        "height": ["x"],
        "snorm": ["b"],
        "enum": ["H"],
        "polyinfo": ["f"],
        "deptest": ["alphas"],
        "gmember": ["x"],
        "gdivmember": ["x"],
        "epsmember": ["x"],
        "depgamma": ["alphas"],
        "lfcheck": ["f1", "f2"],
        "stbound": ["n", "s"],
        "hsearch": ["f", "H"],
        "validate": ["f", "H"],
        "scan12": ["H"],
        "scan13": ["f", "H"],
        "scan15": ["f1", "f2", "H"],
    }.get(args.command, [])
    return [r for r in required if getattr(args, r) is None]


def run(argv) -> tuple[int, str, str]:
    """Dispatch ``argv``; returns (exit code, stdout text, stderr text)."""
    from .expsearch import HypothesisError, ScanReport
    from .stbound import BoundInputError

    try:
        args = _parse(argv)
        miss = _missing(args)
        if miss:
            raise InputError("missing required values: " + ", ".join("--" + m.replace("_", "-") for m in miss))
        notes: list[str] = []
        result = COMMANDS[args.command][0](args, notes)
    except HypothesisError as exc:
        return EXIT_HYPOTHESIS, "", _err("hypothesis", str(exc), hypotheses=exc.report)
    except ResourceError as exc:
        return EXIT_RESOURCE, "", _err("resource", str(exc))
    except BoundInputError as exc:
        return EXIT_INPUT, "", _err("invalid_input", str(exc), field=exc.field)
    except (InputError, ValueError, ZeroDivisionError, KeyError, TypeError) as exc:
        return EXIT_INPUT, "", _err("invalid_input", str(exc))
    except SystemExit as exc:  # --help and --version
        return int(exc.code or 0), "", ""
    if isinstance(result, ScanReport):
        if args.format == "csv":
            return EXIT_OK, result.to_csv(), ""
        payload = result.to_dict()
    else:
        payload = {"version": __version__, "command": args.command, **result}
    if notes:
        payload["notes"] = notes
    if args.seed is not None:
        payload["seed"] = args.seed
    return EXIT_OK, json.dumps(payload, sort_keys=True, indent=2) + "\n", ""


def _err(kind, message, **extra) -> str:
    return json.dumps({"error": kind, "message": message, "version": __version__, **extra}, sort_keys=True) + "\n"


def main(argv=None) -> int:
    code, out, err = run(sys.argv[1:] if argv is None else argv)
    sys.stdout.write(out)
    sys.stderr.write(err)
    return code


if __name__ == "__main__":
    sys.exit(main())
