"""Pure-Python versions of the integer kernels."""

from math import gcd

# Trial division is only attempted below this; larger inputs go to sympy.
TRIAL_LIMIT = 1 << 32


def factor_small(n):
    """Factor ``2 <= n < TRIAL_LIMIT`` by trial division; list of (p, e)."""
    out = []
    if n < 2:
        return out
    for p in (2, 3):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    p, step = 5, 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += step
        step = 6 - step
    if n > 1:
        out.append((n, 1))
    return out


def coprime_pairs(N):
    """All (p, q) with 1 <= p, q <= N and gcd(p, q) = 1.

    Ordered by max(p, q), then p, then q.
    """
    if N < 1:
        return []
    out = [(1, 1)]
    for M in range(2, N + 1):
        out.extend((p, M) for p in range(1, M) if gcd(p, M) == 1)
        out.extend((M, q) for q in range(1, M) if gcd(M, q) == 1)
    return out


def count_coprime_pairs(N):
    """Number of coprime pairs in [1, N]^2, via a totient sieve."""
    if N < 1:
        return 0
    phi = list(range(N + 1))
    for i in range(2, N + 1):
        if phi[i] == i:
            for j in range(i, N + 1, i):
                phi[j] -= phi[j] // i
    return 2 * sum(phi[1:]) - 1


def smooth_upto(N, primes):
    """Sorted positive integers <= N whose prime factors all lie in ``primes``."""
    if N < 1:
        return []
    out = [1]
    for p in sorted(set(primes)):
        if p > N:
            break
        grown = []
        for x in out:
            v = x
            while v * p <= N:
                v *= p
                grown.append(v)
        out.extend(grown)
    out.sort()
    return out
