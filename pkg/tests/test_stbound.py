import itertools

import mpmath
import pytest

from muldep.stbound import (
    BoundInputError,
    BoundInputs,
    chain_holds,
    compute_constants,
    exponent_bound,
    fixed_point_holds,
    lemma27_rhs,
)

BASE = BoundInputs(2, 1, 1, 0, 1, 1, 1)
GRID = list(
    itertools.product(range(2, 6), range(1, 5), (1, 2), (0, 1, 3), (1, 2, 97), (1, 10))
)


def oracle_log_c(n, s, d, h, D, P, N):
    """Closed form of log C, evaluated independently at 200 bits."""
    with mpmath.workprec(200):
        lstar = lambda x: max(mpmath.mpf(1), mpmath.log(x))  # noqa: E731
        return (
            12 * n * n * s * mpmath.log(4)
            + 38 * n * s * mpmath.log(10 * n * n * s)
            + 12 * n * d * h
            + 6 * n * mpmath.log(D)
            + n * n * mpmath.log(P)
            + 3 * n * s * mpmath.log(lstar(P))
            + mpmath.log(lstar(N))
        )


def test_base_value():
    rep = compute_constants(BASE)
    with mpmath.workprec(200):
        expect = 48 * mpmath.log(4) + 76 * mpmath.log(40)
    assert abs(rep.log_C - expect) < mpmath.mpf(10) ** -30
    assert float(rep.log_C) == pytest.approx(346.897, abs=1e-3)
    assert float(rep.log_m_bound) == pytest.approx(353.439, abs=1e-3)


def test_height_shift():
    a = compute_constants(BASE).log_C
    b = compute_constants(BoundInputs(2, 1, 1, 1, 1, 1, 1)).log_C
    assert abs((b - a) - 24) < mpmath.mpf(10) ** -30


def test_log_identity():
    rep = compute_constants(BoundInputs(3, 2, 1, 1, 1, 5, 7))
    lm, overflow = exponent_bound(BoundInputs(3, 2, 1, 1, 1, 5, 7))
    assert overflow
    with mpmath.workprec(128):
        expect = mpmath.log(2) + rep.log_C + mpmath.log(rep.log_C)
        assert abs(lm - expect) < mpmath.mpf(10) ** -30


def test_c3_definition():
    rep = compute_constants(BASE)
    with mpmath.workprec(200):
        expect = 16 * mpmath.log(4) + 74 * mpmath.log(40)
    assert abs(rep.log_C3 - expect) < mpmath.mpf(10) ** -30


@pytest.mark.parametrize("params", GRID[::7])
def test_against_oracle(params):
    n, s, d, h, P, N = params
    rep = compute_constants(BoundInputs(n, s, d, h, 1, P, N))
    expect = oracle_log_c(n, s, d, h, 1, P, N)
    assert abs(rep.log_C - expect) / expect < mpmath.mpf(10) ** -30


def test_grid_invariants():
    for n, s, d, h, P, N in GRID:
        rep = compute_constants(BoundInputs(n, s, d, h, 1, P, N))
        assert chain_holds(rep)
        assert fixed_point_holds(rep)
        assert rep.log_C2 <= rep.log_C
        assert min(rep.log_C0, rep.log_C1, rep.log_C4, rep.log_C5, rep.log_C6) >= 0


def test_monotone():
    base = compute_constants(BoundInputs(3, 2, 2, 1, 5, 7, 9)).log_m_bound
    for bumped in (
        BoundInputs(4, 2, 2, 1, 5, 7, 9),
        BoundInputs(3, 3, 2, 1, 5, 7, 9),
        BoundInputs(3, 2, 3, 1, 5, 7, 9),
        BoundInputs(3, 2, 2, 2, 5, 7, 9),
        BoundInputs(3, 2, 2, 1, 6, 7, 9),
        BoundInputs(3, 2, 2, 1, 5, 11, 9),
        BoundInputs(3, 2, 2, 1, 5, 7, 90),
    ):
        assert compute_constants(bumped).log_m_bound >= base


@pytest.mark.parametrize(
    "inp,field",
    [
        (BoundInputs(1, 1), "n"),
        (BoundInputs(2, 0), "s"),
        (BoundInputs(2, 1, 3), "d"),
        (BoundInputs(2, 1, 1, -1), "h_f"),
        (BoundInputs(2, 1, 1, 0, 5), "abs_disc"),
        (BoundInputs(2, 1, 1, 0, 1, 0), "P_S"),
        (BoundInputs(2, 1, 1, 0, 1, 1, 0), "N_S_b"),
    ],
)
def test_validation(inp, field):
    with pytest.raises(BoundInputError) as info:
        compute_constants(inp)
    assert info.value.field == field


def test_json_digits():
    out = compute_constants(BASE).to_json()
    assert out["log_C"].startswith("346.896967846")
    assert len(out["log_C"].replace(".", "")) == 30
    # e^353 still fits in a double
    assert out["overflow"] is False and out["m_bound"].startswith("3.1381191138")
    big = compute_constants(BoundInputs(3, 2, 1, 1, 1, 5, 7)).to_json()
    assert big["overflow"] is True and big["m_bound"] is None


def test_lemma27():
    assert lemma27_rhs(2, 1) == pytest.approx(float(7 * mpmath.log(2)))
    n, k, d = 3, 2, 1
    expect = 2 * k * n**k * d * float(mpmath.log(2**n * n))
    assert float(lemma27_rhs(n, k, d)) == pytest.approx(expect)
    assert lemma27_rhs(3, 2, 1, 1, 5) > lemma27_rhs(3, 2, 1, 0, 5) > lemma27_rhs(3, 2, 1, 0, 1)
    with pytest.raises(ValueError):
        lemma27_rhs(2, 3)
