"""Independent brute-force oracles.

These search small exponent boxes with plain Fraction arithmetic and share
no code with the lattice-based implementation.
"""

import itertools
import random
from fractions import Fraction

from muldep.polyrat import Poly

SMALL_POOL = [Fraction(s * a, b) for s in (1, -1) for a in range(1, 21) for b in range(1, 21)]


def exponent_box(n, K):
    for k in itertools.product(range(-K, K + 1), repeat=n):
        if any(k):
            yield k


def power_product(alphas, k):
    out = Fraction(1)
    for a, e in zip(alphas, k):
        out *= a**e
    return out


def brute_absolute(alphas, K=6):
    """First k in the box with prod(alpha^k) = 1, or None."""
    for k in exponent_box(len(alphas), K):
        if power_product(alphas, k) == 1:
            return k
    return None


def gamma_box(gens, C):
    """{prod(g^c) : |c_j| <= C}."""
    out = {Fraction(1)}
    for g in gens:
        out = {x * g**c for x in out for c in range(-C, C + 1)}
    return out


def brute_mod_div(alphas, gens, K=6, M=12, C=None):
    """First (k, m) in the box with prod(alpha^k)^m in the Gamma box."""
    if C is None:
        C = 40 if len(gens) <= 1 else 20
    box = gamma_box(gens, C)
    seen = set()
    for k in exponent_box(len(alphas), K):
        # k and -k give the same answer
        if tuple(-x for x in k) in seen:
            continue
        seen.add(k)
        x = power_product(alphas, k)
        y = Fraction(1)
        for m in range(1, M + 1):
            y *= x
            if y in box:
                return k, m
    return None


def _planted(rng, n):
    base = [Fraction(p) for p in (-1, 2, 3, 5)]
    pool = [x for x in {a * b for a in base for b in base} | set(base) if abs(x.numerator) <= 20]
    pool += [1 / x for x in pool]
    return [rng.choice(pool) for _ in range(n)]


def sample_instance(rng: random.Random):
    """(alphas, gens) with n <= 3 and numerators/denominators <= 20.

    Half the instances draw from small products of -1, 2, 3, 5, which
    plants relations; the rest are uniform.
    """
    n = rng.randint(1, 3)
    if rng.random() < 0.5:
        alphas = _planted(rng, n)
    else:
        alphas = [rng.choice(SMALL_POOL) for _ in range(n)]
    r = rng.randint(0, 2)
    gens = [rng.choice(SMALL_POOL) for _ in range(r)]
    return alphas, gens


def radical_height_sample(rng: random.Random) -> Poly:
    """Random polynomial of degree <= 8, coefficient heights <= log 100,
    often with repeated factors so the radical differs from f."""
    while True:
        if rng.random() < 0.5:
            coeffs = [Fraction(rng.randint(-100, 100), rng.randint(1, 100)) for _ in range(rng.randint(2, 9))]
            f = Poly(coeffs)
        else:
            f = Poly.const(Fraction(rng.randint(1, 10), rng.randint(1, 10)))
            while f.degree < rng.randint(1, 8):
                lin = Poly([rng.randint(1, 3), rng.randint(-5, 5)])
                f = f * lin ** rng.randint(1, 3)
            if f.degree > 8:
                continue
        if f.degree >= 1 and max(max(abs(c.numerator), c.denominator) for c in f.coeffs) <= 100:
            return f
