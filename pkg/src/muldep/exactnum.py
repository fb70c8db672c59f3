"""Exact rationals with prime factorizations, S-sets and Weil heights over Q.

Every rational is kept as a coprime pair with positive denominator
(:class:`fractions.Fraction`).  Heights use the natural logarithm.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Mapping

import mpmath

from . import _kernels

DEFAULT_ENUM_CAP = 10**7

# float height bounds get this much relative slack so that math.log(n) admits n
_FLOAT_SLACK = 1e-12


class ResourceError(RuntimeError):
    """A computation would exceed a configured size cap."""


def to_fraction(x) -> Fraction:
    """Parse ``x`` (int, Fraction, "p/q" string or (p, q) pair) exactly."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, Rational):
        return Fraction(x.numerator, x.denominator)
    if isinstance(x, tuple) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, str):
        s = x.strip()
        if not s:
            raise ValueError("empty rational string")
        return Fraction(s)
    if isinstance(x, FactoredRational):
        return x.value
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def format_rational(x) -> str:
    """Serialize as "p/q", or "n" for integers."""
    x = to_fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def factor_int(n: int) -> dict[int, int]:
    """Prime factorization of ``|n|`` (n nonzero)."""
    if n == 0:
        raise ValueError("zero has no factorization")
    n = abs(n)
    if n == 1:
        return {}
    return _kernels.factor_positive(n)


class FactoredRational:
    """A nonzero rational as a sign and a prime -> exponent map.

    Instances are immutable and hashable; the value 1 is ``(+1, {})``.
    """

    __slots__ = ("sign", "_exps", "_hash")

    def __init__(self, sign: int, exponents: Mapping[int, int] | None = None):
        if sign not in (1, -1):
            raise ValueError("sign must be +1 or -1")
        exps = {}
        for p, e in (exponents or {}).items():
            if e:
                if p < 2:
                    raise ValueError(f"{p} is not a prime")
                exps[int(p)] = int(e)
        object.__setattr__(self, "sign", sign)
        object.__setattr__(self, "_exps", dict(sorted(exps.items())))
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("FactoredRational is immutable")

    @property
    def exponents(self) -> dict[int, int]:
        return dict(self._exps)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(self._exps)

    def valuation(self, p: int) -> int:
        return self._exps.get(p, 0)

    @property
    def value(self) -> Fraction:
        num = den = 1
        for p, e in self._exps.items():
            if e > 0:
                num *= p**e
            else:
                den *= p ** (-e)
        return Fraction(self.sign * num, den)

    @property
    def numerator(self) -> int:
        return self.value.numerator

    @property
    def denominator(self) -> int:
        return self.value.denominator

    def is_one(self) -> bool:
        return self.sign == 1 and not self._exps

    def __mul__(self, other: "FactoredRational") -> "FactoredRational":
        exps = dict(self._exps)
        for p, e in other._exps.items():
            exps[p] = exps.get(p, 0) + e
        return FactoredRational(self.sign * other.sign, exps)

    def __truediv__(self, other: "FactoredRational") -> "FactoredRational":
        return self * other ** -1

    def __pow__(self, k: int) -> "FactoredRational":
        k = int(k)
        sign = -1 if (self.sign == -1 and k % 2) else 1
        return FactoredRational(sign, {p: e * k for p, e in self._exps.items()})

    def __eq__(self, other):
        if isinstance(other, FactoredRational):
            return self.sign == other.sign and self._exps == other._exps
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            object.__setattr__(self, "_hash", hash((self.sign, tuple(self._exps.items()))))
        return self._hash

    def __repr__(self):
        return f"FactoredRational({self.sign:+d}, {self._exps})"

    def __str__(self):
        return format_rational(self.value)

    def __reduce__(self):
        return (FactoredRational, (self.sign, self._exps))


def factor(x) -> FactoredRational:
    """Factor a nonzero rational.

    >>> factor("12/5").exponents
    {2: 2, 3: 1, 5: -1}
    """
    if isinstance(x, FactoredRational):
        return x
    q = to_fraction(x)
    if q == 0:
        raise ValueError("zero has no factorization")
    exps = dict(factor_int(q.numerator))
    for p, e in factor_int(q.denominator).items():
        exps[p] = -e
    return FactoredRational(1 if q > 0 else -1, exps)


def unfactor(f: FactoredRational) -> Fraction:
    return f.value


def product(factors: Iterable[FactoredRational], exponents: Iterable[int]) -> FactoredRational:
    """``prod(f_i ** k_i)`` computed on exponent maps."""
    out = FactoredRational(1)
    for f, k in zip(factors, exponents):
        if k:
            out = out * f**k
    return out


@dataclass(frozen=True)
class HeightValue:
    """A Weil height ``value`` (natural log); ``integer`` is the exact
    argument of the logarithm when one is held."""

    value: float
    integer: int | None = None

    @property
    def exact_flag(self) -> bool:
        return self.integer is not None

    @classmethod
    def of_int(cls, n: int) -> "HeightValue":
        return cls(math.log(n), n)

    def __float__(self):
        return self.value


def height_int(x) -> int:
    """``max(|p|, |q|)`` for the reduced form of ``x``; height is its log."""
    q = to_fraction(x)
    if q == 0:
        raise ValueError("height of zero is undefined")
    return max(abs(q.numerator), q.denominator)


def height(x) -> HeightValue:
    """Absolute logarithmic Weil height of a nonzero rational."""
    return HeightValue.of_int(height_int(x))


@dataclass(frozen=True)
class LogOf:
    """The exact bound ``log(n)`` for a positive rational ``n``."""

    n: Fraction

    def __post_init__(self):
        object.__setattr__(self, "n", to_fraction(self.n))
        if self.n < 1:
            raise ValueError("LogOf needs n >= 1 (heights are nonnegative)")

    def __float__(self):
        return math.log(self.n)

    def __str__(self):
        return f"log:{format_rational(self.n)}"


def parse_bound(text):
    """Parse a height bound: "log:200", a decimal such as "0.1", or a number.

    Decimal strings become exact rationals.  Returns (bound, exact).
    """
    if isinstance(text, (LogOf, Fraction, int)):
        return text, True
    if isinstance(text, float):
        return text, False
    s = str(text).strip()
    if s.startswith("log:"):
        return LogOf(Fraction(s[4:])), True
    if s.startswith("log(") and s.endswith(")"):
        return LogOf(Fraction(s[4:-1])), True
    try:
        return Fraction(s), True
    except ValueError:
        return float(s), False


def bound_value(H) -> float:
    return float(H)


def floor_exp(H, factor: int = 1) -> int:
    """Largest integer N with log N <= H + log(factor).

    ``H`` may be a LogOf, an exact rational, or a float (floats get a
    1e-12 relative slack).
    """
    if factor < 1:
        raise ValueError("factor must be >= 1")
    if isinstance(H, LogOf):
        v = H.n * factor
        return v.numerator // v.denominator
    if isinstance(H, (int, Fraction)):
        H = Fraction(H)
        if H < 0:
            raise ValueError("height bounds must be nonnegative")
        if H == 0:
            return factor
        with mpmath.workdps(60):
            v = mpmath.exp(mpmath.mpf(H.numerator) / H.denominator) * factor
            # e^H is irrational for rational H != 0, so floor is unambiguous
            return int(mpmath.floor(v))
    H = float(H)
    if H < 0 or math.isnan(H):
        raise ValueError("height bounds must be nonnegative")
    if math.isinf(H):
        raise ResourceError("infinite height bound")
    with mpmath.workdps(60):
        v = mpmath.exp(mpmath.mpf(H)) * factor
        n = int(mpmath.floor(v))
        if n + 1 <= v * (1 + _FLOAT_SLACK):
            n += 1
        return n


def add_bounds(a, b):
    """Sum of two height bounds, kept exact when possible."""
    if isinstance(a, LogOf) and isinstance(b, LogOf):
        return LogOf(a.n * b.n)
    if isinstance(a, (int, Fraction)) and isinstance(b, (int, Fraction)):
        return Fraction(a) + Fraction(b)
    return float(a) + float(b)


def height_at_most(x, H) -> bool:
    return height_int(x) <= floor_exp(H)


@dataclass(frozen=True)
class PlaceSet:
    """The archimedean place together with finitely many primes."""

    finite_primes: tuple[int, ...] = ()

    def __post_init__(self):
        primes = tuple(sorted(set(int(p) for p in self.finite_primes)))
        for p in primes:
            if p < 2 or factor_int(p) != {p: 1}:
                raise ValueError(f"{p} is not a prime")
        object.__setattr__(self, "finite_primes", primes)

    includes_infinity = True

    @property
    def s(self) -> int:
        return 1 + len(self.finite_primes)

    @property
    def t(self) -> int:
        return len(self.finite_primes)

    def __contains__(self, p):
        return p in self.finite_primes

    def union(self, primes: Iterable[int]) -> "PlaceSet":
        return PlaceSet(tuple(self.finite_primes) + tuple(primes))

    def is_s_integer(self, x) -> bool:
        f = factor(x)
        return all(e >= 0 or p in self for p, e in f.exponents.items())

    def is_s_unit(self, x) -> bool:
        return all(p in self for p in factor(x).support)

    def to_json(self) -> list[int]:
        return list(self.finite_primes)

    def __str__(self):
        return "{" + ", ".join(["inf"] + [str(p) for p in self.finite_primes]) + "}"


def s_norm(b, S: PlaceSet) -> Fraction:
    """``|b|_inf * prod_{p in S} p^(-v_p(b))``.

    >>> s_norm(12, PlaceSet((2,)))
    Fraction(3, 1)
    """
    f = factor(b)
    out = abs(f.value)
    for p in S.finite_primes:
        e = f.valuation(p)
        if e:
            out *= Fraction(p) ** (-e)
    return out


def p_s_q_s(S: PlaceSet) -> tuple[int, int]:
    if not S.finite_primes:
        return 1, 1
    return max(S.finite_primes), math.prod(S.finite_primes)


def log_star(x):
    """``max(1, log x)``; mpmath input gives mpmath output."""
    if isinstance(x, mpmath.mpf):
        if x <= 0:
            raise ValueError("log* needs a positive argument")
        return max(mpmath.mpf(1), mpmath.log(x))
    if isinstance(x, Fraction):
        if x <= 0:
            raise ValueError("log* needs a positive argument")
        return max(1.0, math.log(x.numerator) - math.log(x.denominator))
    if x <= 0:
        raise ValueError("log* needs a positive argument")
    return max(1.0, math.log(x))


def _sort_key(pq_sign):
    (p, q), sign = pq_sign
    return (max(p, q), p, q, 0 if sign > 0 else 1)


def enumerate_bounded_height(H, cap: int = DEFAULT_ENUM_CAP) -> list[Fraction]:
    """All nonzero rationals of height at most ``H``.

    Ordered by max(|p|, q), then |p|, then q, then sign (+ first).
    Raises ResourceError when more than ``cap`` elements would be produced.
    """
    N = floor_exp(H)
    # 2 * coprime pairs <= 2 N^2; only sieve when the crude bound is over the cap
    if 2 * N * N > cap:
        if N > 10**7 or 2 * _kernels.count_coprime_pairs(N) > cap:
            raise ResourceError(
                f"A(Q, H) with floor(e^H) = {N} exceeds the enumeration cap {cap}"
            )
    out = []
    for p, q in _kernels.coprime_pairs(N):
        out.append(Fraction(p, q))
        out.append(Fraction(-p, q))
    return out


def count_bounded_height(H) -> int:
    return 2 * _kernels.count_coprime_pairs(floor_exp(H))


def enumerate_smooth_bounded_height(
    H, primes: Iterable[int], factor: int = 1, cap: int = DEFAULT_ENUM_CAP
) -> list[Fraction]:
    """Nonzero rationals of height <= H + log(factor) supported on ``primes``.

    This is the subset of A(Q, H + log factor) relevant whenever the
    support is already known to lie inside ``primes``.  Same ordering as
    :func:`enumerate_bounded_height`.
    """
    N = floor_exp(H, factor)
    primes = sorted(set(primes))
    if N > (1 << 62) and primes:
        raise ResourceError(f"smooth enumeration bound {N} too large")
    smooth = _kernels.smooth_upto(N, primes) if primes else [1]
    if len(smooth) * len(smooth) > 4 * cap:
        raise ResourceError("smooth enumeration exceeds the cap")
    pairs = []
    for a in smooth:
        for b in smooth:
            if math.gcd(a, b) == 1:
                pairs.append(((a, b), 1))
                pairs.append(((a, b), -1))
    if len(pairs) > cap:
        raise ResourceError("smooth enumeration exceeds the cap")
    pairs.sort(key=_sort_key)
    return [Fraction(s * p, q) for (p, q), s in pairs]


def primes_upto(N: int) -> list[int]:
    if N < 2:
        return []
    sieve = bytearray([1]) * (N + 1)
    sieve[0] = sieve[1] = 0
    for i in range(2, int(N**0.5) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(range(i * i, N + 1, i)))
    return [i for i in range(N + 1) if sieve[i]]


def rational_sort_key(x):
    """Canonical order: height, then |numerator|, denominator, sign (+ first).

    Zero sorts first.
    """
    q = to_fraction(x)
    if q == 0:
        return (0, 0, 0, 0)
    p, d = abs(q.numerator), q.denominator
    return (max(p, d), p, d, 0 if q > 0 else 1)
