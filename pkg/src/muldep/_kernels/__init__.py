"""Integer kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it imports cleanly, unless the
environment variable ``MULDEP_PURE_PYTHON`` is set to a non-empty value
other than ``0``.  ``BACKEND`` names the active implementation.
"""

import os

from . import _fallback

native = None
if os.environ.get("MULDEP_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _native as native
    except ImportError:  # extension not built
        native = None

_impl = native if native is not None else _fallback
BACKEND = "native" if native is not None else "python"

TRIAL_LIMIT = _impl.TRIAL_LIMIT
coprime_pairs = _impl.coprime_pairs
count_coprime_pairs = _impl.count_coprime_pairs


def smooth_upto(N, primes):
    if N >= (1 << 62):
        return _fallback.smooth_upto(N, primes)
    return _impl.smooth_upto(N, primes)


def factor_positive(n):
    """Prime factorization of an integer ``n >= 1`` as a dict."""
    if n < 1:
        raise ValueError("factor_positive needs n >= 1")
    if n < TRIAL_LIMIT:
        return dict(_impl.factor_small(n))
    # strip small primes cheaply before handing the cofactor to sympy
    out = {}
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        while n % p == 0:
            n //= p
            out[p] = out.get(p, 0) + 1
    if n < TRIAL_LIMIT:
        out.update(_impl.factor_small(n))
        return out
    from sympy import factorint

    for p, e in factorint(n).items():
        out[int(p)] = out.get(int(p), 0) + int(e)
    return out


__all__ = [
    "BACKEND",
    "TRIAL_LIMIT",
    "coprime_pairs",
    "count_coprime_pairs",
    "factor_positive",
    "smooth_upto",
]
