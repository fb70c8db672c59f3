# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels.

Same contracts as ``_fallback``; the dispatcher in ``__init__`` decides
which one is used.
"""

from libc.stdint cimport uint64_t, int64_t

# Trial division is only attempted below this; larger inputs go to sympy.
TRIAL_LIMIT = 1 << 44


cdef inline uint64_t _gcd(uint64_t a, uint64_t b) nogil:
    cdef uint64_t t
    while b:
        t = a % b
        a = b
        b = t
    return a


def factor_small(n):
    """Factor ``2 <= n < TRIAL_LIMIT`` by trial division; list of (p, e)."""
    cdef uint64_t m = n
    cdef uint64_t p, step
    cdef int e
    out = []
    if m < 2:
        return out
    for p in (2, 3):
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((int(p), e))
    p = 5
    step = 2
    while p * p <= m:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            out.append((int(p), e))
        p += step
        step = 6 - step
    if m > 1:
        out.append((int(m), 1))
    return out


def coprime_pairs(long N):
    """All (p, q) with 1 <= p, q <= N and gcd(p, q) = 1.

    Ordered by max(p, q), then p, then q.
    """
    cdef long M, p, q
    out = []
    if N < 1:
        return out
    out.append((1, 1))
    for M in range(2, N + 1):
        for p in range(1, M):
            if _gcd(p, M) == 1:
                out.append((p, M))
        for q in range(1, M):
            if _gcd(M, q) == 1:
                out.append((M, q))
    return out


def count_coprime_pairs(long N):
    """Number of coprime pairs in [1, N]^2, via a totient sieve."""
    cdef long i, j
    cdef int64_t total = 0
    if N < 1:
        return 0
    phi = list(range(N + 1))
    cdef long[:] ph
    import array
    arr = array.array('l', phi)
    ph = arr
    for i in range(2, N + 1):
        if ph[i] == i:
            j = i
            while j <= N:
                ph[j] -= ph[j] // i
                j += i
    for i in range(1, N + 1):
        total += ph[i]
    return int(2 * total - 1)


def smooth_upto(N, primes):
    """Sorted positive integers <= N whose prime factors all lie in ``primes``."""
    cdef uint64_t bound
    cdef uint64_t v, p
    if N < 1:
        return []
    if N >= (1 << 62):
        raise OverflowError("bound too large for the native kernel")
    bound = N
    out = [1]
    for p_obj in sorted(set(primes)):
        p = p_obj
        if p > bound:
            break
        grown = []
        for x in out:
            v = x
            while v <= bound // p:
                v *= p
                grown.append(int(v))
        out.extend(grown)
    out.sort()
    return out
