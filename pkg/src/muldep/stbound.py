"""Explicit constants for the exponent bound m <= 2 C log C in the
superelliptic equation f(x) = b y^m over S-integers.

All constants are astronomically large, so every quantity is kept as its
natural logarithm in mpmath arbitrary precision (default 128 bits).
"""

from __future__ import annotations

import os
from dataclasses import asdict, dataclass
from fractions import Fraction

import mpmath

from .exactnum import LogOf, log_star

DEFAULT_PREC = int(os.environ.get("MULDEP_PREC", "128"))
DIGITS = 30


class BoundInputError(ValueError):
    """An input violates the bound's preconditions; ``field`` names it."""

    def __init__(self, field: str, message: str):
        super().__init__(f"{field}: {message}")
        self.field = field


def _real(x):
    if isinstance(x, LogOf):
        return mpmath.log(_real(x.n))
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, str):
        return mpmath.mpf(x)
    return mpmath.mpf(x)


@dataclass(frozen=True)
class BoundInputs:
    """Parameters of the bound.

    Attributes:
        n: degree of f (at least 2).
        s: number of places in S.
        d: degree of the number field.
        h_f: height of f.
        abs_disc: absolute discriminant of the field.
        P_S: largest rational prime below S (1 if none).
        N_S_b: S-norm of b.
    """

    n: int
    s: int
    d: int = 1
    h_f: object = 0
    abs_disc: object = 1
    P_S: object = 1
    N_S_b: object = 1

    def validate(self) -> "BoundInputs":
        for name in ("n", "s", "d"):
            v = getattr(self, name)
            if isinstance(v, bool) or not isinstance(v, int):
                raise BoundInputError(name, "must be an integer")
        if self.n < 2:
            raise BoundInputError("n", "degree must be at least 2")
        if self.s < 1:
            raise BoundInputError("s", "S must contain at least one place")
        if self.d < 1:
            raise BoundInputError("d", "field degree must be at least 1")
        if self.d > 2 * self.s:
            raise BoundInputError("d", "field degree cannot exceed 2s")
        with mpmath.workprec(DEFAULT_PREC):
            if _real(self.h_f) < 0:
                raise BoundInputError("h_f", "height must be nonnegative")
            if _real(self.abs_disc) < 1:
                raise BoundInputError("abs_disc", "discriminant must be at least 1")
            if self.d == 1 and _real(self.abs_disc) != 1:
                raise BoundInputError("abs_disc", "must be 1 over the rationals")
            if _real(self.P_S) < 1:
                raise BoundInputError("P_S", "must be at least 1")
            if _real(self.N_S_b) <= 0:
                raise BoundInputError("N_S_b", "must be positive")
        return self

    def to_json(self) -> dict:
        return {
            k: (v if isinstance(v, int) else str(getattr(self, k)))
            for k, v in asdict(self).items()
        }


@dataclass(frozen=True)
class BoundReport:
    """Logs of every constant plus the final bound; mpf values."""

    inputs: BoundInputs
    prec: int
    log_C0: mpmath.mpf
    log_C1: mpmath.mpf
    log_C2: mpmath.mpf
    log_C3: mpmath.mpf
    log_C4: mpmath.mpf
    log_C5: mpmath.mpf
    log_C6: mpmath.mpf
    log_C: mpmath.mpf
    log_threshold: mpmath.mpf
    log_m_bound: mpmath.mpf

    @property
    def overflow(self) -> bool:
        """True when m_bound does not fit in a double."""
        return self.log_m_bound > 709

    @property
    def m_bound(self):
        """2 C log C as an mpf (mpmath exponents never overflow)."""
        with mpmath.workprec(self.prec):
            return mpmath.exp(self.log_m_bound)

    def admits(self, m: int) -> bool:
        """Does the exponent m respect the bound?"""
        with mpmath.workprec(self.prec):
            return mpmath.log(m) <= self.log_m_bound

    def to_json(self) -> dict:
        fmt = lambda v: mpmath.nstr(v, DIGITS, strip_zeros=False)  # noqa: E731
        out = {"inputs": self.inputs.to_json(), "prec_bits": self.prec}
        for name in ("log_C0", "log_C1", "log_C2", "log_C3", "log_C4", "log_C5", "log_C6", "log_C"):
            out[name] = fmt(getattr(self, name))
        out["log_m_threshold"] = fmt(self.log_threshold)
        out["log_m_bound"] = fmt(self.log_m_bound)
        out["m_bound"] = None if self.overflow else fmt(self.m_bound)
        out["overflow"] = self.overflow
        return out


def compute_constants(inp: BoundInputs, prec: int | None = None) -> BoundReport:
    """Evaluate log C0 .. log C6, log C and the exponent bound."""
    inp.validate()
    prec = prec or DEFAULT_PREC
    with mpmath.workprec(prec):
        n, s, d = mpmath.mpf(inp.n), mpmath.mpf(inp.s), mpmath.mpf(inp.d)
        h = _real(inp.h_f)
        lD = mpmath.log(_real(inp.abs_disc))
        lP = mpmath.log(_real(inp.P_S))
        llP = mpmath.log(log_star(_real(inp.P_S)))
        llN = mpmath.log(log_star(_real(inp.N_S_b)))
        l4 = mpmath.log(4)
        ns = n * s
        a = mpmath.log(10 * n**2 * s)

        c0 = 2 * ns * (n * l4 + mpmath.log(n**3 * s)) + (2 * n - 2) * d * h + n * lD
        c1 = (
            mpmath.log(1200)
            + ns * (2 * n * l4 + mpmath.log(n**9 * s**4))
            + (2 * n - 2) * d * h
            + n * lD
            + (ns - 1) * llP
        )
        b4 = n * l4 + mpmath.log(n**4 * s)
        c2 = 4 * ns * b4 + 4 * n * d * h + 2 * n * lD + llP + llN
        c3 = 4 * n**2 * s * l4 + 37 * ns * a + 11 * n * d * h + 6 * n * lD + n**2 * lP + llN
        c4 = 4 * ns * b4 + 4 * n * d * h + 2 * n * lD + (ns - 1) * llP
        c5 = (
            mpmath.log(2 * 1200**2)
            + 2 * ns * (6 * n * l4 + mpmath.log(n**25 * s**8))
            + 12 * n * d * h
            + 6 * n * lD
            + 3 * ns * llP
            + llN
        )
        c6 = (6 * ns + 3) * mpmath.log(32 * mpmath.e * n**2 * s)
        c = 12 * n**2 * s * l4 + 38 * ns * a + 12 * n * d * h + 6 * n * lD + n**2 * lP + 3 * ns * llP + llN
        thr = 4 * n**2 * s * l4 + 38 * ns * a + 11 * n * d * h + 6 * n * lD + n**2 * lP + llN
        lm = mpmath.log(2) + c + mpmath.log(c)
        return BoundReport(inp, prec, c0, c1, c2, c3, c4, c5, c6, c, thr, lm)


def exponent_bound(inp: BoundInputs, prec: int | None = None) -> tuple[mpmath.mpf, bool]:
    """log(2 C log C) and whether the plain value overflows a double."""
    rep = compute_constants(inp, prec)
    return rep.log_m_bound, rep.overflow


def chain_holds(rep: BoundReport) -> bool:
    """log(6 n^2 s) + log C5 + log C6 + n^2 log P_S <= log C."""
    inp = rep.inputs
    with mpmath.workprec(rep.prec):
        lhs = (
            mpmath.log(6 * inp.n**2 * inp.s)
            + rep.log_C5
            + rep.log_C6
            + inp.n**2 * mpmath.log(_real(inp.P_S))
        )
        return lhs <= rep.log_C


def fixed_point_holds(rep: BoundReport) -> bool:
    """z / log z >= C for z = 2 C log C, compared in log-space."""
    with mpmath.workprec(rep.prec):
        lz = rep.log_m_bound
        return lz - mpmath.log(lz) >= rep.log_C


def lemma27_rhs(n: int, k: int, d: int = 1, h_f=0, abs_disc=1, prec: int | None = None) -> mpmath.mpf:
    """Log of the discriminant bound for the field generated by k roots of f.

    For k = 1 the sharper form is used with [L:K] replaced by its worst
    case n.
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}]")
    with mpmath.workprec(prec or DEFAULT_PREC):
        h = _real(h_f)
        lD = mpmath.log(_real(abs_disc))
        l2, ln = mpmath.log(2), mpmath.log(n)
        if k == 1:
            return (2 * n - 2) * n * d * l2 + (2 * n - 1) * d * ln + (2 * n - 2) * d * h + n * lD
        nk = mpmath.mpf(n) ** k
        return 2 * k * nk * d * (n * l2 + ln + h) + nk * lD
