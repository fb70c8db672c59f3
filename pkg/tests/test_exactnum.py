import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from muldep.exactnum import (
    FactoredRational,
    LogOf,
    PlaceSet,
    ResourceError,
    count_bounded_height,
    enumerate_bounded_height,
    enumerate_smooth_bounded_height,
    factor,
    floor_exp,
    format_rational,
    height,
    height_int,
    log_star,
    p_s_q_s,
    parse_bound,
    s_norm,
    unfactor,
)

nonzero = st.builds(
    Fraction,
    st.integers(-(10**6), 10**6).filter(bool),
    st.integers(1, 10**6),
)


class TestFactor:
    def test_examples(self):
        f = factor(Fraction(12, 5))
        assert f.sign == 1 and f.exponents == {2: 2, 3: 1, 5: -1}
        assert factor(-1).sign == -1 and factor(-1).exponents == {}
        assert factor(1).is_one()

    def test_zero(self):
        with pytest.raises(ValueError, match="zero has no factorization"):
            factor(0)

    @given(nonzero)
    def test_round_trip(self, x):
        assert unfactor(factor(x)) == x

    @given(nonzero, nonzero)
    def test_multiplicative(self, x, y):
        assert (factor(x) * factor(y)).value == x * y
        assert (factor(x) / factor(y)).value == x / y

    def test_large_factorization_uses_fallback(self):
        p, q = 1000000007, 998244353
        f = factor(p * q * 8)
        assert f.exponents == {2: 3, q: 1, p: 1}


class TestHeight:
    def test_examples(self):
        assert height(Fraction(2, 3)).value == pytest.approx(math.log(3))
        assert height(-5).integer == 5
        assert height(1).value == 0

    def test_zero(self):
        with pytest.raises(ValueError):
            height(0)

    @given(nonzero, nonzero, st.integers(-10, 10))
    def test_group_compatibility(self, x, y, k):
        assert height_int(x * y) <= height_int(x) * height_int(y)
        assert height_int(x**k) == height_int(x) ** abs(k)


class TestSNorm:
    def test_examples(self):
        assert s_norm(12, PlaceSet((2,))) == 3
        assert s_norm(12, PlaceSet((2, 3))) == 1
        assert s_norm(10, PlaceSet()) == 10

    def test_p_s_q_s(self):
        assert p_s_q_s(PlaceSet((2, 3))) == (3, 6)
        assert p_s_q_s(PlaceSet()) == (1, 1)
        assert p_s_q_s(PlaceSet((5,))) == (5, 5)

    @given(st.lists(st.sampled_from([2, 3, 5, 7]), min_size=1), st.integers(-3, 3), st.booleans())
    def test_product_formula(self, primes, e, neg):
        x = Fraction(-1 if neg else 1)
        for p in primes:
            x *= Fraction(p) ** e
        assert s_norm(x, PlaceSet(tuple(primes))) == 1

    def test_rejects_composite(self):
        with pytest.raises(ValueError):
            PlaceSet((4,))


class TestLogStar:
    def test_examples(self):
        assert log_star(1) == 1
        assert log_star(mpmath.e**2) == pytest.approx(2)
        assert log_star(0.5) == 1
        with pytest.raises(ValueError):
            log_star(0)

    @given(st.floats(1e-6, 1e6), st.floats(1e-6, 1e6))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert 1 <= log_star(lo) <= log_star(hi)


class TestEnumeration:
    def test_examples(self):
        assert enumerate_bounded_height(LogOf(2)) == [1, -1, Fraction(1, 2), Fraction(-1, 2), 2, -2]
        assert enumerate_bounded_height(0) == [1, -1]
        assert len(enumerate_bounded_height(LogOf(3))) == 14

    @pytest.mark.parametrize("N", [1, 2, 5, 13, 40])
    def test_properties(self, N):
        vals = enumerate_bounded_height(LogOf(N))
        assert len(set(vals)) == len(vals) == count_bounded_height(LogOf(N))
        assert all(height_int(v) <= N for v in vals)
        brute = {Fraction(s * p, q) for p in range(1, N + 1) for q in range(1, N + 1) for s in (1, -1)}
        assert set(vals) == brute

    def test_monotone(self):
        sizes = [count_bounded_height(LogOf(n)) for n in range(1, 30)]
        assert sizes == sorted(sizes)

    def test_cap(self):
        with pytest.raises(ResourceError):
            enumerate_bounded_height(40, cap=1000)

    def test_smooth_subset(self):
        full = [x for x in enumerate_bounded_height(LogOf(50)) if set(factor(x).support) <= {2, 3}]
        assert enumerate_smooth_bounded_height(LogOf(50), [2, 3]) == full


class TestBounds:
    def test_parse(self):
        assert parse_bound("log:200") == (LogOf(200), True)
        assert parse_bound("0.1") == (Fraction(1, 10), True)
        assert parse_bound("1e-1")[0] == Fraction(1, 10)

    def test_floor_exp(self):
        assert floor_exp(LogOf(32)) == 32
        assert floor_exp(0) == 1
        assert floor_exp(Fraction(1, 10), 2) == 2
        assert floor_exp(3.0) == 20
        assert floor_exp(math.log(32)) == 32

    def test_format(self):
        assert format_rational(Fraction(-3, 4)) == "-3/4"
        assert format_rational(5) == "5"

    def test_immutability(self):
        f = FactoredRational(1, {2: 1})
        with pytest.raises(AttributeError):
            f.sign = -1
