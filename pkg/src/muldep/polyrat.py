"""Univariate polynomials over Q.

Coefficients are stored in descending degree order, ``a0*X^n + ... + an``,
as exact fractions.  The zero polynomial has no coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

from .exactnum import (
    HeightValue,
    ResourceError,
    factor_int,
    format_rational,
    height_int,
    to_fraction,
)


class Poly:
    """Immutable polynomial with rational coefficients (descending order)."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        i = 0
        while i < len(cs) and cs[i] == 0:
            i += 1
        object.__setattr__(self, "coeffs", tuple(cs[i:]))

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    def __reduce__(self):
        return (Poly, (self.coeffs,))

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def x(cls) -> "Poly":
        return cls([1, 0])

    @classmethod
    def linear_root(cls, r) -> "Poly":
        """The monic polynomial X - r."""
        return cls([1, -to_fraction(r)])

    @classmethod
    def from_roots(cls, roots, lead=1) -> "Poly":
        out = cls.const(lead)
        for r in roots:
            out = out * cls.linear_root(r)
        return out

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[0] if self.coeffs else Fraction(0)

    def coeff(self, k: int) -> Fraction:
        """Coefficient of X^k."""
        if k < 0 or k > self.degree:
            return Fraction(0)
        return self.coeffs[self.degree - k]

    def is_constant(self) -> bool:
        return self.degree <= 0

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly([{', '.join(format_rational(c) for c in self.coeffs)}])"

    def __str__(self):
        return self.pretty()

    def pretty(self, var: str = "X") -> str:
        if not self.coeffs:
            return "0"
        parts = []
        n = self.degree
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            k = n - i
            mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
            mag = abs(c)
            if mono and mag == 1:
                body = mono
            elif mono:
                body = f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("-" if c < 0 else "+") + body)
        return "".join(parts)

    # arithmetic

    def _pad(self, length):
        return (Fraction(0),) * (length - len(self.coeffs)) + self.coeffs

    def __add__(self, other):
        other = _as_poly(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return Poly(a + b for a, b in zip(self._pad(n), other._pad(n)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-_as_poly(other))

    def __rsub__(self, other):
        return _as_poly(other) - self

    def __mul__(self, other):
        other = _as_poly(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative polynomial power")
        out = Poly.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        c = to_fraction(c)
        return Poly(c * a for a in self.coeffs)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        if self.degree < dq:
            return Poly(), self
        quot = []
        lead = other.lc
        for i in range(len(rem) - dq):
            c = rem[i] / lead
            quot.append(c)
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[i + j] -= c * b
        return Poly(quot), Poly(rem[len(rem) - dq :] if dq > 0 else [])

    def __floordiv__(self, other):
        return self.divmod(_as_poly(other))[0]

    def __mod__(self, other):
        return self.divmod(_as_poly(other))[1]

    def exact_div(self, other: "Poly") -> "Poly":
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def __call__(self, x):
        x = to_fraction(x)
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * x + c
        return acc

    def derivative(self) -> "Poly":
        n = self.degree
        return Poly(c * (n - i) for i, c in enumerate(self.coeffs[:-1]))

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return self.scale(1 / self.lc)

    def content(self) -> Fraction:
        """Positive rational c such that self / c has coprime integer coefficients."""
        if self.is_zero():
            return Fraction(0)
        den = reduce(_lcm, (c.denominator for c in self.coeffs), 1)
        num = reduce(math.gcd, (c.numerator for c in self.coeffs), 0)
        return Fraction(abs(num), den)

    def primitive_integer(self) -> tuple[Fraction, list[int]]:
        """(content, integer coefficient list) with self = content * ints."""
        c = self.content()
        return c, [int(a / c) for a in self.coeffs]

    def to_json(self) -> list[str]:
        return [format_rational(c) for c in self.coeffs]

    @classmethod
    def from_json(cls, data: Sequence) -> "Poly":
        return cls(to_fraction(c) for c in data)


def _as_poly(x) -> Poly:
    return x if isinstance(x, Poly) else Poly.const(x)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


ONE = Poly.const(1)
X = Poly.x()


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    a, b = f, g
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _check_nonzero(*fs):
    for f in fs:
        if f.is_zero():
            raise ValueError("zero polynomial")


def _projective_height_int(values: list[Fraction]) -> int:
    den = reduce(_lcm, (v.denominator for v in values), 1)
    ints = [int(v * den) for v in values]
    g = reduce(math.gcd, ints, 0)
    return max(abs(i) // g for i in ints)


def poly_heights(f: Poly) -> tuple[HeightValue, HeightValue]:
    """(h(f), h_hom(f)): heights of [1, a0, ..., an] and [a0, ..., an]."""
    _check_nonzero(f)
    h = _projective_height_int([Fraction(1), *f.coeffs])
    hh = _projective_height_int(list(f.coeffs))
    return HeightValue.of_int(h), HeightValue.of_int(hh)


@dataclass(frozen=True)
class SquarefreeDecomposition:
    """f = unit * prod(part ** mult); parts monic, squarefree, pairwise coprime."""

    unit: Fraction
    parts: tuple[tuple[Poly, int], ...]

    def reconstruct(self) -> Poly:
        out = Poly.const(self.unit)
        for p, e in self.parts:
            out = out * p**e
        return out

    @property
    def radical(self) -> Poly:
        """Monic product of the parts."""
        out = ONE
        for p, _ in self.parts:
            out = out * p
        return out

    @property
    def distinct_root_count(self) -> int:
        return sum(p.degree for p, _ in self.parts)


def squarefree_decompose(f: Poly) -> SquarefreeDecomposition:
    """Yun's algorithm (characteristic zero)."""
    if f.degree < 1:
        raise ValueError("squarefree decomposition needs a nonconstant polynomial")
    unit = f.lc
    fm = f.monic()
    d = fm.derivative()
    a0 = poly_gcd(fm, d)
    b = fm.exact_div(a0)
    c = d.exact_div(a0)
    dd = c - b.derivative()
    parts = []
    i = 1
    while b.degree > 0:
        a = poly_gcd(b, dd)
        if a.degree > 0:
            parts.append((a, i))
        b = b.exact_div(a)
        c = dd.exact_div(a)
        dd = c - b.derivative()
        i += 1
    return SquarefreeDecomposition(unit, tuple(parts))


def radical(f: Poly) -> Poly:
    """f* = lc(f) times the product of the distinct monic linear factors."""
    return squarefree_decompose(f).radical.scale(f.lc)


def distinct_root_count(f: Poly) -> int:
    if f.degree < 1:
        return 0
    return squarefree_decompose(f).distinct_root_count


def resultant(f: Poly, g: Poly) -> Fraction:
    """Sylvester resultant via the subresultant pseudo-remainder sequence."""
    _check_nonzero(f, g)
    if f.degree == 0 and g.degree == 0:
        return Fraction(1)
    if f.degree == 0:
        return f.lc ** g.degree
    if g.degree == 0:
        return g.lc ** f.degree
    # pull out rational contents: Res(cA, dB) = c^deg B d^deg A Res(A, B)
    cf, A = f.primitive_integer()
    cg, B = g.primitive_integer()
    scale = cf ** g.degree * cg ** f.degree
    return scale * _resultant_int(A, B)


def _resultant_int(A: list[int], B: list[int]) -> int:
    """Subresultant algorithm on primitive integer coefficient lists."""
    s = 1
    if len(A) < len(B):
        A, B = B, A
        if (len(A) - 1) % 2 == 1 and (len(B) - 1) % 2 == 1:
            s = -s
    g = h = Fraction(1)
    A = [Fraction(a) for a in A]
    B = [Fraction(b) for b in B]
    while True:
        da, db = len(A) - 1, len(B) - 1
        delta = da - db
        if da % 2 == 1 and db % 2 == 1:
            s = -s
        R = _prem_full(A, B)
        A = B
        if not R:
            return 0
        div = g * h**delta
        B = [c / div for c in R]
        g = A[0]
        h = h ** (1 - delta) * g**delta
        if len(B) - 1 == 0:
            break
    da = len(A) - 1
    h = h ** (1 - da) * B[0] ** da
    val = s * h
    assert val.denominator == 1
    return int(val)


def _prem_full(A: list[Fraction], B: list[Fraction]) -> list[Fraction]:
    """lc(B)^(deg A - deg B + 1) * A mod B, as a coefficient list."""
    delta = len(A) - len(B)
    lb = B[0]
    r = list(A)
    e = delta + 1
    while r and len(r) >= len(B):
        lead = r[0]
        r = [lb * c for c in r]
        for j in range(len(B)):
            r[j] -= lead * B[j]
        r = r[1:]
        e -= 1
        while r and r[0] == 0:
            r = r[1:]
    if e > 0:
        r = [c * lb**e for c in r]
    while r and r[0] == 0:
        r = r[1:]
    return r


def discriminant(f: Poly) -> Fraction:
    """(-1)^(n(n-1)/2) / a0 * Res(f, f')."""
    n = f.degree
    if n < 2:
        raise ValueError("discriminant needs degree >= 2")
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    return sign * resultant(f, f.derivative()) / f.lc


def bad_reduction_primes(f: Poly) -> set[int]:
    """Primes p with v_p(a_i) < 0 for some i, or v_p(a0) > 0."""
    _check_nonzero(f)
    out = set()
    for c in f.coeffs:
        if c.denominator > 1:
            out.update(factor_int(c.denominator))
    out.update(factor_int(f.lc.numerator))
    return out


def _rational_roots(f: Poly, candidate_cap: int = 20000) -> list[Fraction] | None:
    """Rational roots of a squarefree f, or None if the divisor search is too big."""
    if f.degree < 1:
        return []
    # strip zero roots first
    roots = []
    cs = list(f.coeffs)
    while cs and cs[-1] == 0:
        roots.append(Fraction(0))
        cs.pop()
    if len(cs) <= 1:
        return roots
    _, ints = Poly(cs).primitive_integer()
    a0, an = abs(ints[0]), abs(ints[-1])
    dn = _divisors(an, candidate_cap)
    d0 = _divisors(a0, candidate_cap)
    if dn is None or d0 is None or len(dn) * len(d0) > candidate_cap:
        return None
    g = Poly(cs)
    seen = set()
    for p in dn:
        for q in d0:
            r = Fraction(p, q)
            for cand in (r, -r):
                if cand not in seen:
                    seen.add(cand)
                    if g(cand) == 0:
                        roots.append(cand)
    return roots


def _divisors(n: int, cap: int) -> list[int] | None:
    if n == 0:
        return [1]
    if n.bit_length() > 200:
        return None
    divs = [1]
    for p, e in factor_int(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
        if len(divs) > cap:
            return None
    return sorted(divs)


def _split_linear(f: Poly) -> list[Poly]:
    """Split rational linear factors off a monic squarefree polynomial."""
    roots = _rational_roots(f)
    if not roots:
        return [f]
    roots.sort(key=lambda r: (abs(r), r < 0))
    out = [Poly.linear_root(r) for r in roots]
    rest = f
    for lin in out:
        rest = rest.exact_div(lin)
    if rest.degree > 0:
        out.append(rest.monic())
    return out


def _multiplicity(f: Poly, b: Poly) -> tuple[int, Poly]:
    e = 0
    while True:
        q, r = f.divmod(b)
        if not r.is_zero():
            return e, f
        f = q
        e += 1


@dataclass(frozen=True)
class CoprimeBasis:
    basis: tuple[Poly, ...]
    exponents: tuple[tuple[int, ...], ...]
    contents: tuple[Fraction, ...]

    def reconstruct(self, i: int) -> Poly:
        out = Poly.const(self.contents[i])
        for b, e in zip(self.basis, self.exponents[i]):
            out = out * b**e
        return out


def coprime_basis(fs: Sequence[Poly], split_linear: bool = True) -> CoprimeBasis:
    """Gcd-free basis of ``fs``: monic, squarefree, pairwise coprime.

    Each input equals its content times a product of basis powers.  With
    ``split_linear`` the rational linear factors are split off, which is
    the only partial factorization performed.
    """
    for f in fs:
        _check_nonzero(f)
    basis: list[Poly] = []

    def add(q: Poly):
        # q is squarefree; split it and the basis against each other
        q = q.monic()
        i = 0
        while i < len(basis) and q.degree >= 1:
            g = poly_gcd(q, basis[i])
            if g.degree >= 1:
                rest = basis[i].exact_div(g)
                basis[i] = g
                if rest.degree >= 1:
                    basis.insert(i + 1, rest.monic())
                    i += 1
                q = q.exact_div(g).monic()
            i += 1
        if q.degree >= 1:
            basis.append(q)

    for f in fs:
        if f.degree >= 1:
            for part, _ in squarefree_decompose(f).parts:
                add(part)
    if split_linear:
        refined = []
        for b in basis:
            refined.extend(_split_linear(b))
        basis = refined
    exps = []
    contents = []
    for f in fs:
        rest = f
        row = []
        for b in basis:
            e, rest = _multiplicity(rest, b)
            row.append(e)
        if rest.degree != 0:
            raise AssertionError("coprime basis failed to cover an input")
        exps.append(tuple(row))
        contents.append(rest.lc)
    return CoprimeBasis(tuple(basis), tuple(exps), tuple(contents))


DEFAULT_ITERATE_HEIGHT_CAP = 5000.0


def evaluate_and_iterate(
    f: Poly, alpha, m: int, height_cap: float = DEFAULT_ITERATE_HEIGHT_CAP
) -> list[Fraction]:
    """[f(alpha), f(f(alpha)), ..., f^(m)(alpha)], exactly."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    out = []
    x = to_fraction(alpha)
    for i in range(1, m + 1):
        x = f(x)
        if x != 0 and math.log(height_int(x)) > height_cap:
            raise ResourceError(f"iterate {i} exceeds the height cap {height_cap}")
        out.append(x)
    return out
