"""Multiplicative relations among nonzero rationals, modulo a finitely
generated group, its division group, or its height-epsilon thickening.

Everything reduces to exact integer linear algebra on prime exponent
vectors (see :mod:`muldep.lattice`).

Torsion over Q is only {1, -1}.  Hence x lies in the division group of
Gamma exactly when the exponent vector of x lies in the rational span of
Gamma's exponent columns: if m*e(x) is in the integer span then
x^m = +-g for some g in Gamma and x^(2m) = g^2 is in Gamma.  Signs never
obstruct membership in the division group, which makes those tests pure
linear algebra.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import lcm
from typing import Sequence

from . import lattice as lat
from .exactnum import (
    FactoredRational,
    LogOf,
    enumerate_smooth_bounded_height,
    factor,
    floor_exp,
    format_rational,
    height_int,
    product,
    to_fraction,
)
from .polyrat import Poly, coprime_basis

IN, OUT, BOUNDARY = "IN", "OUT", "BOUNDARY"


@dataclass(frozen=True)
class GroupSpec:
    """A finitely generated subgroup of Q* given by generators.

    An empty generator list is the trivial group.
    """

    generators: tuple[FactoredRational, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(factor(g) for g in self.generators))

    @classmethod
    def of(cls, *gens) -> "GroupSpec":
        return cls(tuple(gens))

    @cached_property
    def support(self) -> tuple[int, ...]:
        primes = set()
        for g in self.generators:
            primes.update(g.support)
        return tuple(sorted(primes))

    @property
    def rank(self) -> int:
        """Number of generators (the r of the height-ball bound)."""
        return len(self.generators)

    @cached_property
    def exponent_matrix(self) -> list[list[int]]:
        return exponent_matrix(self.generators, self.support)

    @cached_property
    def sign_row(self) -> tuple[int, ...]:
        return tuple(g.sign for g in self.generators)

    @cached_property
    def h_gen_int(self) -> int:
        """exp of H_gen, the largest generator height (1 for no generators)."""
        return max((height_int(g.value) for g in self.generators), default=1)

    @property
    def h_gen(self) -> LogOf:
        return LogOf(self.h_gen_int)

    def element(self, c: Sequence[int]) -> FactoredRational:
        return product(self.generators, c)

    def to_json(self) -> list[str]:
        return [format_rational(g.value) for g in self.generators]

    def __str__(self):
        return "<" + ", ".join(self.to_json()) + ">"


def exponent_matrix(elems: Sequence[FactoredRational], primes: Sequence[int]) -> list[list[int]]:
    """Rows indexed by ``primes``, one column per element."""
    return [[e.valuation(p) for e in elems] for p in primes]


@dataclass(frozen=True)
class RelationWitness:
    """Certificate for prod(alpha_i^k_i) / eta, raised to m, equal to
    prod(g_j^c_j) with c = gamma_exponents.

    Absent optional parts mean eta = 1, m = 1 and an empty group element.
    """

    k: tuple[int, ...]
    eta: Fraction | None = None
    gamma_exponents: tuple[int, ...] | None = None
    m: int | None = None

    def power_product(self, alphas: Sequence) -> FactoredRational:
        val = product([factor(a) for a in alphas], self.k)
        if self.eta is not None:
            val = val / factor(self.eta)
        return val

    def verify(
        self, alphas: Sequence, gamma: GroupSpec | None = None, eta_bound=None, eta_factor: int = 1
    ) -> bool:
        """Re-check the relation by exact arithmetic (values, not exponents).

        With ``eta_bound`` set, also require h(eta) <= eta_bound + log(eta_factor).
        """
        if not any(self.k):
            return False
        vals = [to_fraction(a) for a in alphas]
        lhs = Fraction(1)
        for a, k in zip(vals, self.k):
            lhs *= a**k
        if self.eta is not None:
            if self.eta == 0:
                return False
            lhs /= self.eta
            if eta_bound is not None and height_int(self.eta) > floor_exp(eta_bound, eta_factor):
                return False
        lhs = lhs ** (self.m or 1)
        rhs = Fraction(1)
        if self.gamma_exponents is not None:
            if gamma is None:
                return False
            for g, c in zip(gamma.generators, self.gamma_exponents):
                rhs *= g.value**c
        return lhs == rhs

    def to_json(self) -> dict:
        return {
            "k": list(self.k),
            "eta": None if self.eta is None else format_rational(self.eta),
            "m": self.m,
            "gamma_exponents": None if self.gamma_exponents is None else list(self.gamma_exponents),
        }


@dataclass(frozen=True)
class Verdict:
    verdict: str
    witness: RelationWitness | None = None
    reason: str = ""

    def __post_init__(self):
        if self.verdict not in (IN, OUT, BOUNDARY):
            raise ValueError(f"unknown verdict {self.verdict!r}")

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "witness": None if self.witness is None else self.witness.to_json(),
            "reason": self.reason,
        }


# -- integer kernels -------------------------------------------------------


def integer_kernel(M: Sequence[Sequence[int]], n: int | None = None) -> list[list[int]]:
    """Hermite-form basis of {k : M k = 0}."""
    if n is None and M:
        n = len(M[0])
    if n is None or n < 1:
        raise ValueError("matrix must have at least one column")
    return lat.integer_kernel([list(r) for r in M], n)


def _parity(f: FactoredRational) -> int:
    return 1 if f.sign < 0 else 0


def _relation_lattice(alphas: Sequence[FactoredRational], gamma: GroupSpec) -> list[list[int]]:
    """Hermite basis of {k : prod alpha^k in Gamma}, signs included."""
    n, r = len(alphas), gamma.rank
    primes = sorted(set(gamma.support).union(*(a.support for a in alphas)))
    A = exponent_matrix(alphas, primes)
    G = exponent_matrix(gamma.generators, primes)
    # unknowns (k, c, t):  A k - G c = 0,  parity(alpha).k + parity(g).c - 2t = 0
    rows = [A[i] + [-x for x in G[i]] + [0] for i in range(len(primes))]
    rows.append([_parity(a) for a in alphas] + [_parity(g) for g in gamma.generators] + [-2])
    ker = lat.integer_kernel(rows, n + r + 1)
    return lat.hnf([v[:n] for v in ker if any(v[:n])])


def dependence_absolute(alphas: Sequence) -> RelationWitness | None:
    """A relation prod(alpha_i^k_i) = 1 with k != 0, or None.

    >>> dependence_absolute([2, 3, 6]).k
    (1, 1, -1)
    """
    fs = [factor(a) for a in alphas]
    if not fs:
        raise ValueError("need at least one number")
    for i, f in enumerate(fs):
        if f.is_one():
            return RelationWitness(tuple(1 if j == i else 0 for j in range(len(fs))))
    basis = _relation_lattice(fs, GroupSpec())
    if not basis:
        return None
    return RelationWitness(tuple(basis[0]))


def gamma_membership(x, gamma: GroupSpec) -> tuple[int, ...] | None:
    """Exponents c with x = prod(g_j^c_j) exactly (sign included), or None."""
    f = factor(x)
    r = gamma.rank
    primes = sorted(set(gamma.support) | set(f.support))
    if any(p not in gamma.support for p in f.support):
        return None
    if r == 0:
        return () if f.is_one() else None
    G = exponent_matrix(gamma.generators, primes)
    rows = [G[i] + [0] for i in range(len(primes))]
    rows.append([_parity(g) for g in gamma.generators] + [-2])
    rhs = [f.valuation(p) for p in primes] + [_parity(f)]
    sol, _ = lat.solve_integer(rows, rhs, r + 1)
    if sol is None:
        return None
    return tuple(sol[:r])


class _SpanTest:
    """Membership of exponent vectors in the rational span of Gamma."""

    def __init__(self, gamma: GroupSpec, primes: Sequence[int]):
        self.primes = list(primes)
        G = exponent_matrix(gamma.generators, self.primes)
        self.Q = lat.rational_span_test_matrix(G, len(self.primes))

    def vec(self, f: FactoredRational) -> list[int]:
        return [f.valuation(p) for p in self.primes]

    def project(self, v: Sequence[int]) -> list[int]:
        return lat.matvec(self.Q, v)

    def contains(self, f: FactoredRational) -> bool:
        if any(p not in self.primes for p in f.support):
            return False
        return not any(self.project(self.vec(f)))


def _minimal_power(f: FactoredRational, gamma: GroupSpec) -> tuple[int, tuple[int, ...]] | None:
    """Smallest m >= 1 with f^m in Gamma, and exponents for f^m."""
    primes = list(gamma.support)
    if any(p not in gamma.support for p in f.support):
        return None
    v = [f.valuation(p) for p in primes]
    basis = lat.hnf(lat.transpose(gamma.exponent_matrix)) if primes else []
    if basis:
        u = lat.solve_rational_unique(lat.transpose(basis), v)
        if u is None:
            return None
        m0 = lcm(*(x.denominator for x in u)) if u else 1
    else:
        if any(v):
            return None
        m0 = 1
    for m in (m0, 2 * m0):
        c = gamma_membership(f**m, gamma)
        if c is not None:
            return m, c
    raise AssertionError("even power of a division-group element must lie in Gamma")


def gamma_div_membership(x, gamma: GroupSpec) -> Verdict:
    """Is x in the division group of Gamma?  IN carries the least m."""
    f = factor(x)
    res = _minimal_power(f, gamma)
    if res is None:
        return Verdict(OUT, None, "exponent vector outside the rational span of Gamma")
    m, c = res
    return Verdict(IN, RelationWitness((1,), None, c, m), f"x^{m} lies in Gamma")


def _witness_mod_div(alphas, k, gamma, eta=None) -> RelationWitness:
    val = product(alphas, k)
    if eta is not None:
        val = val / factor(eta)
    m, c = _minimal_power(val, gamma)
    return RelationWitness(tuple(k), eta, c, m)


def _setup(alphas: Sequence, gamma: GroupSpec):
    fs = [factor(a) for a in alphas]
    if not fs:
        raise ValueError("need at least one number")
    primes = sorted(set(gamma.support).union(*(f.support for f in fs)))
    span = _SpanTest(gamma, primes)
    A = exponent_matrix(fs, primes)
    QA = lat.matmul(span.Q, A) if span.Q else []
    return fs, primes, span, A, QA


def _div_kernel(QA, n) -> list[list[int]]:
    if not QA:
        return [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    return lat.integer_kernel(QA, n)


def dependence_mod_gamma_div(alphas: Sequence, gamma: GroupSpec) -> RelationWitness | None:
    """k != 0 with prod(alpha_i^k_i) in the division group of Gamma, or None.

    The returned k has its last nonzero entry positive, so a two-term
    relation reads alpha_1^-1 alpha_2 rather than its inverse.
    """
    fs, primes, span, A, QA = _setup(alphas, gamma)
    ker = _div_kernel(QA, len(fs))
    if not ker:
        return None
    k = lat.reverse_hnf(ker)[0]
    return _witness_mod_div(fs, k, gamma)


def _bound_plus_gamma(eps, gamma: GroupSpec):
    """(eps, integer factor) encoding eps + r * H_gen."""
    return eps, gamma.h_gen_int**gamma.rank


def eps_membership_sandwich(x, gamma: GroupSpec, eps) -> Verdict:
    """Three-valued test for x in Gamma^div_eps intersected with Q*.

    IN: some rational eta of height <= eps has x/eta in Gamma^div.
    OUT: no eta of height <= eps + r*H_gen has x/eta in Gamma.
    BOUNDARY otherwise.
    """
    f = factor(x)
    primes = sorted(set(gamma.support) | set(f.support))
    span = _SpanTest(gamma, primes)
    # x/eta in Gamma^div forces supp(eta) inside supp(x) and supp(Gamma)
    for eta in enumerate_smooth_bounded_height(eps, primes):
        if eta < 0:
            continue
        q = f / factor(eta)
        if span.contains(q):
            m, c = _minimal_power(q, gamma)
            return Verdict(IN, RelationWitness((1,), eta, c, m), "certified by a small-height eta")
    e, mult = _bound_plus_gamma(eps, gamma)
    for eta in enumerate_smooth_bounded_height(e, primes, factor=mult):
        c = gamma_membership(f / factor(eta), gamma)
        if c is not None:
            return Verdict(
                BOUNDARY,
                RelationWitness((1,), eta, c, 1),
                "in the Gamma x A(Q, eps + r H) superset but not certified",
            )
    return Verdict(OUT, None, "superset Gamma x A(Q, eps + r H) misses x")


def dependence_mod_gamma_eps(alphas: Sequence, gamma: GroupSpec, eps) -> Verdict:
    """Multiplicative dependence modulo Gamma^div_eps, three-valued.

    IN is certified by (k, eta, m, c) with h(eta) <= eps; OUT means that
    for every eta of height <= eps + r*H_gen no k != 0 makes
    prod(alpha^k)/eta an element of Gamma.
    """
    fs, primes, span, A, QA = _setup(alphas, gamma)
    n = len(fs)
    ker = _div_kernel(QA, n)
    if ker:
        k = lat.reverse_hnf(ker)[0]
        return Verdict(IN, _witness_mod_div(fs, k, gamma), "dependent modulo Gamma^div")
    # kernel trivial: each eta outside Gamma^div pins k down uniquely
    for eta in enumerate_smooth_bounded_height(eps, primes):
        if eta < 0:
            continue
        rhs = span.project(span.vec(factor(eta)))
        if not any(rhs):
            continue
        k, _ = lat.solve_integer(QA, rhs, n)
        if k is not None:
            # eta and 1/eta have equal height, so orient k like the homogeneous case
            if lat.normalize_sign(k, last=True) != k:
                k, eta = [-x for x in k], 1 / eta
            return Verdict(IN, _witness_mod_div(fs, k, gamma, eta), "certified by a small-height eta")
    e, mult = _bound_plus_gamma(eps, gamma)
    wit = _superset_witness(fs, gamma, primes, A, e, mult)
    if wit is not None:
        return Verdict(BOUNDARY, wit, "superset system solvable but no certificate of height <= eps")
    return Verdict(OUT, None, "no eta in A(Q, eps + r H) admits a relation into Gamma")


def _superset_witness(fs, gamma, primes, A, eps, mult) -> RelationWitness | None:
    n, r = len(fs), gamma.rank
    G = exponent_matrix(gamma.generators, primes)
    rows = [A[i] + [-x for x in G[i]] for i in range(len(primes))]
    for eta in enumerate_smooth_bounded_height(eps, primes, factor=mult):
        if eta < 0:
            continue
        fe = factor(eta)
        rhs = [fe.valuation(p) for p in primes]
        sol, ker = lat.solve_integer(rows, rhs, n + r)
        if sol is None:
            continue
        if not any(sol[:n]):
            extra = next((v for v in ker if any(v[:n])), None)
            if extra is None:
                continue
            sol = [a + b for a, b in zip(sol, extra)]
        if lat.normalize_sign(sol[:n], last=True) != sol[:n]:
            sol, eta = [-x for x in sol], 1 / eta
        k, c = tuple(sol[:n]), tuple(sol[n:])
        # signs were ignored above; fold the sign into eta
        ratio = product(fs, k) / gamma.element(c)
        eta_signed = eta if ratio.sign > 0 else -eta
        return RelationWitness(k, eta_signed, c, 1)
    return None


# -- rational functions ----------------------------------------------------


def _as_rf(f) -> tuple[Poly, Poly]:
    if isinstance(f, Poly):
        return f, Poly.const(1)
    num, den = f
    num = num if isinstance(num, Poly) else Poly(num)
    den = den if isinstance(den, Poly) else Poly(den)
    if num.is_zero() or den.is_zero():
        raise ValueError("zero rational function")
    return num, den


def rf_independence_mod_gamma(fs: Sequence, gamma: GroupSpec) -> RelationWitness | None:
    """A relation prod(f_i^k_i) in Gamma among rational functions, or None.

    ``fs`` holds Poly objects or (numerator, denominator) pairs.  The
    function part must cancel over a coprime basis; the leftover constant
    must lie in Gamma.
    """
    pairs = [_as_rf(f) for f in fs]
    if not pairs:
        raise ValueError("need at least one function")
    polys = [p for pair in pairs for p in pair]
    cb = coprime_basis(polys, split_linear=False)
    n = len(pairs)
    rows = []
    consts = []
    for i in range(n):
        en, ed = cb.exponents[2 * i], cb.exponents[2 * i + 1]
        rows.append([a - b for a, b in zip(en, ed)])
        consts.append(factor(cb.contents[2 * i] / cb.contents[2 * i + 1]))
    nb = len(cb.basis)
    M = [[rows[i][j] for i in range(n)] for j in range(nb)]
    K = lat.integer_kernel(M, n) if M else [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    if not K:
        return None
    reduced = [product(consts, v) for v in K]
    U = _relation_lattice(reduced, gamma)
    if not U:
        return None
    ks = lat.hnf([[sum(u[j] * K[j][i] for j in range(len(K))) for i in range(n)] for u in U])
    k = tuple(ks[0])
    c = gamma_membership(product(consts, k), gamma)
    return RelationWitness(k, None, c, 1)


def rf_hypothesis_holds(fs: Sequence, gamma: GroupSpec) -> bool:
    """True when X, f_1, ..., f_n are multiplicatively independent modulo Gamma."""
    return rf_independence_mod_gamma([Poly.x(), *fs], gamma) is None


# -- linear fractional generation -----------------------------------------


@dataclass(frozen=True)
class LFResult:
    """f1^k1 f2^k2 = const * ell^t with ell linear fractional.

    kind: "constant" (t = 0), "linear" (ell = X - a) or "ratio"
    (ell = (X - a)/(X - b)).
    """

    k: tuple[int, int]
    kind: str
    t: int
    numerator: Poly | None = None
    denominator: Poly | None = None

    @property
    def description(self) -> str:
        if self.kind == "constant":
            return "constant"
        num = _paren(self.numerator)
        if self.kind == "linear":
            return num if self.t == 1 else f"{num}^{self.t}"
        body = f"{num}/{_paren(self.denominator)}"
        return body if self.t == 1 else f"({body})^{self.t}"

    def to_json(self) -> dict:
        return {
            "k": list(self.k),
            "kind": self.kind,
            "t": self.t,
            "numerator": None if self.numerator is None else self.numerator.to_json(),
            "denominator": None if self.denominator is None else self.denominator.to_json(),
            "ell": self.description,
        }


def _paren(p: Poly) -> str:
    s = p.pretty()
    return f"({s})" if ("+" in s[1:] or "-" in s[1:]) else s


def lf_generation_check(f1: Poly, f2: Poly) -> LFResult | None:
    """Can f1, f2 multiplicatively generate a power of a linear fractional
    function (constants included)?  Returns the relation or None.
    """
    if f1.degree < 1 or f2.degree < 1:
        raise ValueError("lf_generation_check needs nonconstant polynomials")
    cb = coprime_basis([f1, f2])
    r1, r2 = cb.exponents
    nb = len(cb.basis)
    lin = sorted((j for j in range(nb) if cb.basis[j].degree == 1), key=lambda j: -cb.basis[j].coeffs[1])

    def v(k, j):
        return k[0] * r1[j] + k[1] * r2[j]

    def solve(rows):
        return lat.integer_kernel(rows, 2) if rows else [[1, 0], [0, 1]]

    allrows = [[r1[j], r2[j]] for j in range(nb)]
    ker = solve(allrows)
    if ker:
        k = lat.normalize_sign(ker[0])
        return LFResult(tuple(k), "constant", 0)
    root = {j: -cb.basis[j].coeffs[1] for j in lin}
    for j in lin:
        ker = solve([allrows[i] for i in range(nb) if i != j])
        k = next((w for w in ker if v(w, j) != 0), None)
        if k is not None:
            if v(k, j) < 0:
                k = [-x for x in k]
            return LFResult(tuple(k), "linear", v(k, j), cb.basis[j])
    for a_i, i in enumerate(lin):
        for j in lin[a_i + 1 :]:
            rows = [allrows[l] for l in range(nb) if l not in (i, j)]
            rows.append([r1[i] + r1[j], r2[i] + r2[j]])
            ker = solve(rows)
            k = next((w for w in ker if v(w, i) != 0), None)
            if k is None:
                continue
            # numerator is the point with the smaller root
            top, bot = (i, j) if root[i] < root[j] else (j, i)
            if v(k, top) < 0:
                k = [-x for x in k]
            return LFResult(tuple(k), "ratio", v(k, top), cb.basis[top], cb.basis[bot])
    return None
