"""Set constructions, a superelliptic equation searcher, and scanners that
look for rational points where polynomial values become multiplicatively
dependent modulo an approximate division group.

Scans are empirical: they enumerate alpha in A(Q, H) together with 0 and
report hits, skipped points and per-height-shell hit counts.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor, ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from sympy import integer_nthroot

from . import __version__
from .exactnum import (
    LogOf,
    PlaceSet,
    ResourceError,
    enumerate_bounded_height,
    factor,
    floor_exp,
    format_rational,
    height_int,
    p_s_q_s,
    primes_upto,
    product,
    rational_sort_key,
    s_norm,
    to_fraction,
)
from .mulrel import (
    BOUNDARY,
    IN,
    GroupSpec,
    RelationWitness,
    Verdict,
    _minimal_power,
    dependence_mod_gamma_eps,
    integer_kernel,
    lf_generation_check,
)
from .polyrat import (
    DEFAULT_ITERATE_HEIGHT_CAP,
    Poly,
    bad_reduction_primes,
    distinct_root_count,
    poly_heights,
    resultant,
)
from .stbound import BoundInputs, compute_constants

SHELL_WIDTH = 0.5
# the eta-prime stage lists every prime up to e^(eps + r H); refuse absurd sizes
ETA_PRIME_LIMIT = 10**7


class HypothesisError(ValueError):
    """A theorem hypothesis failed and no override was given."""

    def __init__(self, message: str, report: dict | None = None):
        super().__init__(message)
        self.report = report or {}


@dataclass(frozen=True)
class InstanceSpec:
    """Polynomials f_1..f_n, a group Gamma, epsilon and the height cap H."""

    polys: tuple[Poly, ...]
    gamma: GroupSpec = GroupSpec()
    epsilon: object = 0
    H: object = 0

    def __post_init__(self):
        object.__setattr__(self, "polys", tuple(self.polys))
        if not self.polys:
            raise ValueError("need at least one polynomial")
        for i, f in enumerate(self.polys):
            if f.degree < 1:
                raise ValueError(f"polynomial {i + 1} is constant")
        for name in ("epsilon", "H"):
            if float(getattr(self, name)) < 0:
                raise ValueError(f"{name} must be nonnegative")

    def to_json(self) -> dict:
        return {
            "polys": [f.to_json() for f in self.polys],
            "gamma": self.gamma.to_json(),
            "epsilon": str(self.epsilon),
            "H": str(self.H),
        }


# -- set constructions ------------------------------------------------------


def s_gamma(gamma: GroupSpec) -> PlaceSet:
    """Infinity plus the primes where some generator has nonzero valuation."""
    return PlaceSet(gamma.support)


@dataclass(frozen=True)
class PlaceConstruction:
    places: PlaceSet
    stages: dict

    def to_json(self) -> dict:
        return {
            "places": ["inf"] + list(self.places.finite_primes),
            "stages": {k: sorted(v) for k, v in self.stages.items()},
        }


def s_f_gamma_eps(inst: InstanceSpec) -> PlaceConstruction:
    """Places outside of which the scanners' arguments go through.

    Stages: S_Gamma, bad reduction of each f_i, primes of the pairwise
    resultants, and every prime that can divide some eta of height at most
    eps + r*H_gen.
    """
    gamma = inst.gamma
    stages = {"s_gamma": set(gamma.support), "bad_reduction": set(), "resultant": set(), "eta": set()}
    for f in inst.polys:
        stages["bad_reduction"] |= bad_reduction_primes(f)
    n = len(inst.polys)
    for i in range(n):
        for j in range(i + 1, n):
            r = resultant(inst.polys[i], inst.polys[j])
            if r == 0:
                raise ValueError(f"polynomials {i + 1} and {j + 1} are not pairwise coprime")
            stages["resultant"] |= set(factor(r).support)
    N = floor_exp(inst.epsilon, gamma.h_gen_int**gamma.rank)
    if N > ETA_PRIME_LIMIT:
        raise ResourceError(f"eta stage needs all primes up to {N}")
    stages["eta"] = set(primes_upto(N))
    places = PlaceSet(tuple(set().union(*stages.values())))
    return PlaceConstruction(places, stages)


def diophantine_exponent_basis(degrees: Sequence[int], polys: Sequence[Poly] | None = None):
    """Integer solutions of sum(k_i d_i) = 0 and the function F they induce.

    Returns (basis, F) where F = (numerator, denominator) built from the
    first basis vector, or None when no polys are given or the basis is
    empty.
    """
    degrees = [int(d) for d in degrees]
    if not degrees or any(d < 1 for d in degrees):
        raise ValueError("degrees must be positive integers")
    basis = integer_kernel([degrees], len(degrees))
    F = None
    if polys is not None and basis:
        if len(polys) != len(degrees):
            raise ValueError("one polynomial per degree")
        num, den = Poly.const(1), Poly.const(1)
        for f, t in zip(polys, basis[0]):
            if t > 0:
                num = num * f**t
            elif t < 0:
                den = den * f ** (-t)
        F = (num, den)
    return basis, F


# -- superelliptic equations ----------------------------------------------


def _s_integers(N: int, S: PlaceSet) -> list[Fraction]:
    """S-integers of height <= log N in canonical order."""
    from ._kernels import smooth_upto

    dens = smooth_upto(N, list(S.finite_primes)) if S.finite_primes else [1]
    out = [Fraction(0)]
    for q in dens:
        for p in range(1, N + 1):
            if math.gcd(p, q) == 1:
                out.append(Fraction(p, q))
                out.append(Fraction(-p, q))
    out.sort(key=rational_sort_key)
    return out


def _integer_root(n: int, m: int) -> int | None:
    """Exact m-th root of n >= 0, or None."""
    r, exact = integer_nthroot(n, m)
    return int(r) if exact else None


def _power_root(w: Fraction, m: int) -> Fraction | None:
    """y with y^m = w (y > 0 when m is even), or None."""
    sign = 1
    if w < 0:
        if m % 2 == 0:
            return None
        sign = -1
    a = _integer_root(abs(w.numerator), m)
    b = _integer_root(w.denominator, m)
    if a is None or b is None:
        return None
    return sign * Fraction(a, b)


def hyperelliptic_search(
    f: Poly,
    b,
    S: PlaceSet,
    H,
    m_max: int,
    reduce_powers: bool = True,
    skipped: list | None = None,
) -> list[tuple[Fraction, Fraction, int]]:
    """Solutions of f(x) = b y^m in S-integers x, y with y not an S-unit.

    Searches h(x) <= H and 3 <= m <= m_max.  With ``reduce_powers`` only
    the largest m per x is kept (y^6 = (y^2)^3 would otherwise repeat);
    for even m the positive y is reported.  Points with f(x) = 0 are
    appended to ``skipped`` when given.
    """
    b = to_fraction(b)
    if b == 0:
        raise ValueError("b must be nonzero")
    if not S.is_s_integer(b):
        raise ValueError("b must be an S-integer")
    if f.degree < 1:
        raise ValueError("f must be nonconstant")
    for c in f.coeffs:
        if c and not S.is_s_integer(c):
            raise ValueError("coefficients of f must be S-integers")
    if m_max < 3:
        return []
    out = []
    for x in _s_integers(floor_exp(H), S):
        v = f(x)
        if v == 0:
            if skipped is not None:
                skipped.append((x, "f(x) = 0"))
            continue
        w = factor(v / b)
        outside = {p: e for p, e in w.exponents.items() if p not in S}
        if not outside or any(e < 0 for e in outside.values()):
            continue  # y would be an S-unit, or not S-integral
        g = 0
        for e in w.exponents.values():
            g = math.gcd(g, e)
        ms = [m for m in range(3, m_max + 1) if g % m == 0]
        if reduce_powers:
            ms = ms[-1:]
        for m in ms:
            y = _power_root(w.value, m)
            if y is not None:
                out.append((x, y, m))
    return out


def validate_bound(f: Poly, b, S: PlaceSet, H, m_max: int, prec: int | None = None) -> dict:
    """Compare every exponent found by the search with the explicit bound."""
    if distinct_root_count(f) < 2:
        raise HypothesisError("f needs at least two distinct roots", {"distinct_roots": False})
    sols = hyperelliptic_search(f, b, S, H, m_max)
    P_S, _ = p_s_q_s(S)
    h_f = poly_heights(f)[0]
    inp = BoundInputs(f.degree, S.s, 1, LogOf(h_f.integer), 1, P_S, s_norm(b, S))
    rep = compute_constants(inp, prec)
    violations = [s for s in sols if not rep.admits(s[2])]
    max_m = max((s[2] for s in sols), default=None)
    margin = None
    if max_m is not None:
        import mpmath

        with mpmath.workprec(rep.prec):
            margin = mpmath.nstr(rep.log_m_bound - mpmath.log(max_m), 30)
    return {
        "solutions": [_solution_json(s) for s in sols],
        "bound": rep.to_json(),
        "max_m": max_m,
        "log_margin": margin,
        "violations": [_solution_json(s) for s in violations],
        "ok": not violations,
    }


def _solution_json(s) -> dict:
    x, y, m = s
    return {"x": format_rational(x), "y": format_rational(y), "m": m}


# -- periodicity of 0 -------------------------------------------------------

PERIODIC, NOT_PERIODIC, UNDECIDED = "PERIODIC", "NOT_PERIODIC", "UNDECIDED"


def check_zero_periodicity(f: Poly, step_cap: int = 64) -> tuple[str, str]:
    """Is 0 a periodic point of f?  Returns (verdict, detail).

    Cycle detection within ``step_cap`` steps, plus an escape test: once
    the height passes 2 deg(f) (h(f) + 1) + 10 and has grown for three
    consecutive steps the orbit is declared to diverge.
    """
    if step_cap < 1:
        raise ValueError("step_cap must be at least 1")
    h_f = math.log(poly_heights(f)[0].integer)
    threshold = 2 * max(f.degree, 1) * (h_f + 1) + 10
    seen = {Fraction(0): 0}
    x = Fraction(0)
    prev_h, growth = None, 0
    for i in range(1, step_cap + 1):
        x = f(x)
        if x == 0:
            return PERIODIC, f"0 returns to itself after {i} step(s)"
        if x in seen:
            return NOT_PERIODIC, f"orbit enters a cycle avoiding 0 at step {i}"
        seen[x] = i
        h = math.log(height_int(x))
        growth = growth + 1 if prev_h is not None and h > prev_h else 0
        prev_h = h
        if h > threshold and growth >= 3:
            return NOT_PERIODIC, f"height {h:.3f} escaped past {threshold:.3f} at step {i}"
    return UNDECIDED, f"no decision within {step_cap} steps"


# -- scanning -----------------------------------------------------------------


@dataclass(frozen=True)
class Hit:
    alpha: Fraction
    values: tuple[Fraction, ...]
    verdict: Verdict
    window: int | None = None

    def sort_key(self):
        return (rational_sort_key(self.alpha), -1 if self.window is None else self.window)

    def to_json(self) -> dict:
        out = {
            "alpha": format_rational(self.alpha),
            "height": _height_str(self.alpha),
            "values": [format_rational(v) for v in self.values],
        }
        if self.window is not None:
            out["m"] = self.window
        out.update(self.verdict.to_json())
        return out


def _height_str(a: Fraction) -> str:
    return "0" if a == 0 else f"log:{height_int(a)}"


def _shell(a: Fraction) -> int:
    return 0 if a == 0 else int(math.log(height_int(a)) // SHELL_WIDTH)


@dataclass
class ScanReport:
    kind: str
    instance: dict
    hypothesis_report: dict
    override: bool
    hits: list = field(default_factory=list)
    skipped: list = field(default_factory=list)
    candidates: int = 0
    H: object = 0

    def stabilization(self) -> dict:
        nshells = int(float(self.H) // SHELL_WIDTH) + 1
        counts = [0] * nshells
        for h in self.hits:
            s = _shell(h.alpha)
            if s < nshells:
                counts[s] += 1
        shells = [
            {"lo": round(i * SHELL_WIDTH, 6), "hi": round((i + 1) * SHELL_WIDTH, 6), "hits": c}
            for i, c in enumerate(counts)
        ]
        stable = nshells >= 2 and counts[-1] == 0 and counts[-2] == 0
        return {"shell_width": SHELL_WIDTH, "shells": shells, "stabilized": stable}

    def hit_alphas(self) -> list[Fraction]:
        return [h.alpha for h in self.hits]

    def to_dict(self) -> dict:
        return {
            "version": __version__,
            "kind": self.kind,
            "instance": self.instance,
            "hypotheses": self.hypothesis_report,
            "override": self.override,
            "candidates": self.candidates,
            "hits": [h.to_json() for h in self.hits],
            "hit_count": len(self.hits),
            "skipped": [
                {"alpha": format_rational(a), "reason": r}
                | ({} if w is None else {"m": w})
                for a, r, w in self.skipped
            ],
            "stabilization": self.stabilization(),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["alpha", "height", "m", "verdict", "k", "eta", "power", "gamma_exponents"])
        for h in self.hits:
            wit = h.verdict.witness
            w.writerow(
                [
                    format_rational(h.alpha),
                    _height_str(h.alpha),
                    "" if h.window is None else h.window,
                    h.verdict.verdict,
                    " ".join(map(str, wit.k)),
                    "" if wit.eta is None else format_rational(wit.eta),
                    wit.m or 1,
                    " ".join(map(str, wit.gamma_exponents or ())),
                ]
            )
        return buf.getvalue()


def _hypotheses_12(polys: Sequence[Poly]) -> dict:
    rep = {}
    bad_pairs = []
    for i in range(len(polys)):
        for j in range(i + 1, len(polys)):
            if resultant(polys[i], polys[j]) == 0:
                bad_pairs.append([i + 1, j + 1])
    rep["pairwise_coprime"] = {"passed": not bad_pairs, "detail": {"failing_pairs": bad_pairs}}
    few = [i + 1 for i, f in enumerate(polys) if distinct_root_count(f) < 2]
    rep["two_distinct_roots"] = {"passed": not few, "detail": {"failing": few}}
    return rep


def _require(rep: dict, override: bool):
    failed = sorted(k for k, v in rep.items() if not v["passed"])
    if failed and not override:
        raise HypothesisError("hypothesis failed: " + ", ".join(failed), rep)


def _verify(verdict: Verdict, values, gamma: GroupSpec, eps) -> bool:
    wit = verdict.witness
    if verdict.verdict == IN:
        return wit.verify(values, gamma, eps if wit.eta is not None else None)
    return wit.verify(values, gamma, eps if wit.eta is not None else None, gamma.h_gen_int**gamma.rank)


def _reduce_gcd(verdict: Verdict, values, gamma: GroupSpec) -> Verdict:
    """Divide k by its gcd g when eta is a rational g-th power."""
    wit = verdict.witness
    g = 0
    for x in wit.k:
        g = math.gcd(g, x)
    if g <= 1:
        return verdict
    eta = None
    if wit.eta is not None:
        eta = _power_root(wit.eta, g)
        if eta is None:
            return verdict
    k = tuple(x // g for x in wit.k)
    val = product([factor(v) for v in values], k)
    if eta is not None:
        val = val / factor(eta)
    m, c = _minimal_power(val, gamma)
    return Verdict(verdict.verdict, RelationWitness(k, eta, c, m), verdict.reason)


class _Task:
    """Per-alpha work; a module-level class so process pools can pickle it."""

    def __init__(self, kind, polys, gamma, eps, extra=None):
        self.kind, self.polys, self.gamma, self.eps, self.extra = kind, polys, gamma, eps, extra

    def __call__(self, alphas: list[Fraction]):
        out = []
        for a in alphas:
            if self.kind == "scan13":
                out.extend(self._windows(a))
            else:
                out.append(self._one(a))
        return out

    def _test(self, a, values, window=None):
        v = dependence_mod_gamma_eps(values, self.gamma, self.eps)
        if v.verdict not in (IN, BOUNDARY):
            return None
        if self.kind == "scan15":
            v = _reduce_gcd(v, values, self.gamma)
        if not _verify(v, values, self.gamma, self.eps):
            raise AssertionError(f"witness failed to re-verify at alpha = {a}")
        return ("hit", Hit(a, tuple(values), v, window))

    def _one(self, a):
        values = [f(a) for f in self.polys]
        for i, v in enumerate(values):
            if v == 0:
                return ("skip", (a, f"f{i + 1}(alpha) = 0", None))
        return self._test(a, values)

    def _windows(self, a):
        f = self.polys[0]
        n, m_max, cap = self.extra
        its, err = [], None
        x = a
        for i in range(1, m_max + n + 1):
            x = f(x)
            if x != 0 and math.log(height_int(x)) > cap:
                err = i
                break
            its.append(x)
        out = []
        for m in range(m_max + 1):
            win = its[m : m + n]
            if len(win) < n:
                out.append(("skip", (a, f"iterate {err} exceeds the height cap {cap}", m)))
                continue
            z = next((m + j + 1 for j, v in enumerate(win) if v == 0), None)
            if z is not None:
                out.append(("skip", (a, f"iterate {z} vanishes", m)))
                continue
            r = self._test(a, win, m)
            if r is not None:
                out.append(r)
        return out


def _run(task: _Task, alphas: list[Fraction], workers: int, executor: str = "process"):
    workers = max(1, int(workers))
    if workers == 1 or len(alphas) < 2:
        results = task(alphas)
    else:
        size = max(1, math.ceil(len(alphas) / (workers * 4)))
        chunks = [alphas[i : i + size] for i in range(0, len(alphas), size)]
        pool_cls = ProcessPoolExecutor if executor == "process" else ThreadPoolExecutor
        with pool_cls(max_workers=workers) as pool:
            results = [r for part in pool.map(task, chunks) for r in part]
    hits, skipped = [], []
    for r in results:
        if r is None:
            continue
        (hits if r[0] == "hit" else skipped).append(r[1])
    hits.sort(key=Hit.sort_key)
    skipped.sort(key=lambda s: (rational_sort_key(s[0]), -1 if s[2] is None else s[2]))
    return hits, skipped


def _alphas(H) -> list[Fraction]:
    return [Fraction(0)] + enumerate_bounded_height(H)


def scan_theorem12(inst: InstanceSpec, override: bool = False, workers: int = 1) -> ScanReport:
    """alpha in A(Q, H) and 0 with f_1(alpha), ..., f_n(alpha) dependent
    modulo Gamma^div_eps (IN or BOUNDARY verdicts)."""
    hyp = _hypotheses_12(inst.polys)
    _require(hyp, override)
    alphas = _alphas(inst.H)
    rep = ScanReport("scan12", inst.to_json(), hyp, override, candidates=len(alphas), H=inst.H)
    task = _Task("scan12", inst.polys, inst.gamma, inst.epsilon)
    rep.hits, rep.skipped = _run(task, alphas, workers)
    return rep


def scan_theorem15(
    f1: Poly, f2: Poly, gamma: GroupSpec, eps, H, override: bool = False, workers: int = 1
) -> ScanReport:
    """Pairs f_1(alpha), f_2(alpha) dependent modulo Gamma^div_eps, with
    witnesses reduced to coprime exponents where possible."""
    inst = InstanceSpec((f1, f2), gamma, eps, H)
    lf = lf_generation_check(f1, f2) if min(f1.degree, f2.degree) >= 1 else None
    few = [i + 1 for i, f in enumerate((f1, f2)) if distinct_root_count(f) < 2]
    low = [i + 1 for i, f in enumerate((f1, f2)) if f.degree < 2]
    hyp = {
        "degree_at_least_2": {"passed": not low, "detail": {"failing": low}},
        "two_distinct_roots": {"passed": not few, "detail": {"failing": few}},
        "no_linear_fractional_power": {
            "passed": lf is None,
            "detail": None if lf is None else lf.to_json(),
        },
    }
    _require(hyp, override)
    alphas = _alphas(H)
    rep = ScanReport("scan15", inst.to_json(), hyp, override, candidates=len(alphas), H=H)
    rep.hits, rep.skipped = _run(_Task("scan15", inst.polys, gamma, eps), alphas, workers)
    return rep


def scan_corollary13(
    f: Poly,
    gamma: GroupSpec,
    eps,
    n: int,
    m_max: int,
    H,
    override: bool = False,
    workers: int = 1,
    height_cap: float = DEFAULT_ITERATE_HEIGHT_CAP,
    step_cap: int = 64,
) -> ScanReport:
    """Windows f^(m+1)(alpha), ..., f^(m+n)(alpha), 0 <= m <= m_max,
    dependent modulo Gamma^div_eps."""
    if n < 1 or m_max < 0:
        raise ValueError("need n >= 1 and m_max >= 0")
    inst = InstanceSpec((f,), gamma, eps, H)
    per, detail = check_zero_periodicity(f, step_cap)
    hyp = {
        "two_distinct_roots": {"passed": distinct_root_count(f) >= 2, "detail": None},
        "zero_not_periodic": {"passed": per == NOT_PERIODIC, "detail": {"verdict": per, "reason": detail}},
    }
    _require(hyp, override)
    alphas = _alphas(H)
    data = inst.to_json() | {"window": n, "m_max": m_max, "height_cap": height_cap}
    rep = ScanReport("scan13", data, hyp, override, candidates=len(alphas), H=H)
    task = _Task("scan13", (f,), gamma, eps, (n, m_max, height_cap))
    rep.hits, rep.skipped = _run(task, alphas, workers)
    return rep


def shell_counts(report: ScanReport) -> list[int]:
    return [s["hits"] for s in report.stabilization()["shells"]]


def hits_up_to(report: ScanReport, H) -> list[Fraction]:
    """Hit alphas of height at most H."""
    N = floor_exp(H)
    return [a for a in report.hit_alphas() if a == 0 or height_int(a) <= N]

