import csv
import io
import json
from fractions import Fraction

import pytest

from muldep.exactnum import LogOf, PlaceSet, height_int, rational_sort_key
from muldep.expsearch import (
    NOT_PERIODIC,
    PERIODIC,
    HypothesisError,
    InstanceSpec,
    check_zero_periodicity,
    diophantine_exponent_basis,
    hits_up_to,
    hyperelliptic_search,
    s_f_gamma_eps,
    s_gamma,
    scan_corollary13,
    scan_theorem12,
    scan_theorem15,
    validate_bound,
)
from muldep.mulrel import GroupSpec
from muldep.polyrat import Poly

X = Poly.x()
F = Fraction
PAIR = (X**2 - 1, X**2 - 4)


def places(p):
    return list(p.finite_primes)


class TestPlaceSets:
    def test_s_gamma(self):
        assert places(s_gamma(GroupSpec.of(2, F(3, 5)))) == [2, 3, 5]
        assert places(s_gamma(GroupSpec.of(-1))) == []
        assert places(s_gamma(GroupSpec.of(6))) == [2, 3]

    def test_s_f_gamma_eps(self):
        pc = s_f_gamma_eps(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10)))
        assert places(pc.places) == [2, 3]
        assert pc.stages == {"s_gamma": {2}, "bad_reduction": set(), "resultant": {3}, "eta": {2}}

    def test_resultant_stage_includes_numerator_primes(self):
        # Res((1/3)X^2 + 2, X + 1) = 7/3, so 7 joins 3
        inst = InstanceSpec((Poly([F(1, 3), 0, 2]), X + 1), GroupSpec.of(1), 0)
        pc = s_f_gamma_eps(inst)
        assert pc.stages["bad_reduction"] == {3}
        assert places(pc.places) == [3, 7]

    def test_not_coprime(self):
        with pytest.raises(ValueError, match="not pairwise coprime"):
            s_f_gamma_eps(InstanceSpec((X, X), GroupSpec(), 0))

    def test_monotone(self):
        small = s_f_gamma_eps(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10))).places
        for inst in (
            InstanceSpec(PAIR, GroupSpec.of(2), LogOf(3)),
            InstanceSpec(PAIR, GroupSpec.of(2, 5), F(1, 10)),
        ):
            big = s_f_gamma_eps(inst).places
            assert set(small.finite_primes) <= set(big.finite_primes)


class TestExponentBasis:
    def test_examples(self):
        basis, Fn = diophantine_exponent_basis([2, 2], [X**2 + 1, X**2 - 2])
        assert basis == [[1, -1]] and Fn == (X**2 + 1, X**2 - 2)
        assert len(diophantine_exponent_basis([1, 2, 3])[0]) == 2
        assert diophantine_exponent_basis([3]) == ([], None)


class TestHyperelliptic:
    expected = {(1, 2, 3), (3, 2, 4), (5, 2, 5), (11, 2, 7), (181, 2, 15)}

    def test_ramanujan_nagell(self):
        sols = {(int(x), int(y), m) for x, y, m in hyperelliptic_search(X**2 + 7, 1, PlaceSet(), LogOf(200), 20)}
        positive = {s for s in sols if s[0] > 0}
        assert positive == self.expected
        # f is even, so -x solves whenever x does
        assert sols == self.expected | {(-x, y, m) for x, y, m in self.expected}
        for x, y, m in sols:
            assert x * x + 7 == y**m

    def test_s_units_excluded(self):
        assert hyperelliptic_search(X**2 + 7, 1, PlaceSet((2,)), LogOf(200), 20) == []
        assert hyperelliptic_search(X**2 + 1, 1, PlaceSet(), LogOf(10), 10) == []

    def test_all_powers(self):
        sols = hyperelliptic_search(X**2 + 7, 1, PlaceSet(), LogOf(200), 20, reduce_powers=False)
        assert (181, 8, 5) in sols and (181, 32, 3) in sols and (181, 2, 15) in sols

    def test_invariance(self):
        big = hyperelliptic_search(X**2 + 7, 1, PlaceSet(), LogOf(200), 20, reduce_powers=False)
        small = hyperelliptic_search(X**2 + 7, 1, PlaceSet(), LogOf(60), 8, reduce_powers=False)
        assert set(small) == {s for s in big if abs(s[0]) <= 60 and s[2] <= 8}

    def test_sign_feasibility(self):
        # 2^3 - 16 = (-2)^3: odd m absorbs the sign
        sols = hyperelliptic_search(X**3 - 16, 1, PlaceSet(), LogOf(3), 5, reduce_powers=False)
        assert (2, -2, 3) in sols
        assert all(y > 0 for x, y, m in sols if m % 2 == 0)

    def test_b_and_s_integers(self):
        sols = hyperelliptic_search(X**2 + 7, 2, PlaceSet(), LogOf(20), 10)
        for x, y, m in sols:
            assert x * x + 7 == 2 * y**m
        # x = y^3 over Z[1/2]; 8 and 1/8 are S-units so y = 2 is excluded
        sols = hyperelliptic_search(X + 0, 1, PlaceSet((2,)), LogOf(30), 3)
        assert set(sols) == {(27, 3, 3), (-27, -3, 3), (F(27, 8), F(3, 2), 3), (F(-27, 8), F(-3, 2), 3)}

    def test_bad_b(self):
        with pytest.raises(ValueError):
            hyperelliptic_search(X**2 + 7, 0, PlaceSet(), LogOf(5), 5)
        with pytest.raises(ValueError):
            hyperelliptic_search(X**2 + 7, F(1, 3), PlaceSet(), LogOf(5), 5)


class TestValidateBound:
    def test_ok(self):
        rep = validate_bound(X**2 + 7, 1, PlaceSet(), LogOf(200), 20)
        assert rep["ok"] and rep["max_m"] == 15 and float(rep["log_margin"]) > 300

    def test_hypothesis(self):
        with pytest.raises(HypothesisError):
            validate_bound((X - 1) ** 2, 1, PlaceSet(), LogOf(10), 5)

    def test_difference_of_squares(self):
        rep = validate_bound(X**2 - 1, 1, PlaceSet(), LogOf(50), 10)
        assert rep["ok"] and not rep["violations"]


class TestPeriodicity:
    def test_examples(self):
        assert check_zero_periodicity(X**2 - 1)[0] == PERIODIC
        assert check_zero_periodicity(X**2 + 1)[0] == NOT_PERIODIC
        assert check_zero_periodicity(X)[0] == PERIODIC

    def test_preperiodic(self):
        # 0 -> 2 -> 2: preperiodic, not periodic
        assert check_zero_periodicity(X**2 - X + 2 - 2 * X + X)[0] in (NOT_PERIODIC,)


class TestScan12:
    def test_example_hits(self):
        rep = scan_theorem12(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10), LogOf(20)))
        hits = {h.alpha: h for h in rep.hits}
        assert hits[F(3)].verdict.witness.k == (1, 0)
        assert hits[F(0)].verdict.witness.k == (0, 1)
        assert {F(1), F(-1), F(2), F(-2)} <= {a for a, _, _ in rep.skipped}

    def test_hypothesis_failure(self):
        inst = InstanceSpec((X, (X + 1) * (X + 2)), GroupSpec.of(2), 0, LogOf(4))
        with pytest.raises(HypothesisError) as info:
            scan_theorem12(inst)
        assert info.value.report["two_distinct_roots"]["passed"] is False

    def test_non_finiteness(self):
        counts = []
        for N in (4, 8, 16):
            inst = InstanceSpec((X, (X + 1) * (X + 2)), GroupSpec.of(2), 0, LogOf(N))
            counts.append(len(scan_theorem12(inst, override=True).hits))
        assert counts[0] < counts[1] < counts[2]

    def test_sorted_and_verified(self):
        rep = scan_theorem12(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10), LogOf(12)))
        keys = [rational_sort_key(h.alpha) for h in rep.hits]
        assert keys == sorted(keys)
        for h in rep.hits:
            assert h.verdict.witness.verify(h.values, GroupSpec.of(2), None if h.verdict.witness.eta is None else LogOf(20))

    def test_report_formats(self):
        rep = scan_theorem12(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10), LogOf(8)))
        data = json.loads(rep.to_json())
        assert data["hit_count"] == len(rep.hits) and "version" in data
        rows = list(csv.reader(io.StringIO(rep.to_csv())))
        assert rows[0][:4] == ["alpha", "height", "m", "verdict"] and len(rows) == len(rep.hits) + 1

    def test_hits_up_to(self):
        rep = scan_theorem12(InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10), LogOf(12)))
        assert all(a == 0 or height_int(a) <= 6 for a in hits_up_to(rep, LogOf(6)))


class TestScan13:
    def test_report(self):
        rep = scan_corollary13(X**2 + 1, GroupSpec.of(2), 0, 2, 3, LogOf(3))
        assert rep.hits
        for h in rep.hits:
            assert h.verdict.witness.verify(h.values, GroupSpec.of(2))

    @pytest.mark.parametrize("f", [X**2 - 1, X**2])
    def test_hypothesis(self, f):
        with pytest.raises(HypothesisError):
            scan_corollary13(f, GroupSpec.of(2), 0, 2, 2, LogOf(2))

    def test_height_cap_skips(self):
        rep = scan_corollary13(X**2 + 1, GroupSpec.of(2), 0, 2, 6, LogOf(3), height_cap=30.0)
        assert any("height cap" in r for _, r, _ in rep.skipped)


class TestScan15:
    def test_counterexample(self):
        f1, f2 = X * (X + 2), (X + 1) * (X + 2)
        with pytest.raises(HypothesisError) as info:
            scan_theorem15(f1, f2, GroupSpec.of(3), 0, LogOf(4))
        assert info.value.report["no_linear_fractional_power"]["passed"] is False
        rep = scan_theorem15(f1, f2, GroupSpec.of(3), 0, LogOf(4), override=True)
        hits = {h.alpha: h for h in rep.hits}
        assert hits[F(1, 2)].verdict.witness.k == (-1, 1)

    def test_finite(self):
        rep = scan_theorem15(*PAIR, GroupSpec.of(2), 0, LogOf(20))
        assert rep.hits
        stab = rep.stabilization()
        assert sum(s["hits"] for s in stab["shells"]) == len(rep.hits)
        from math import gcd

        for h in rep.hits:
            k = h.verdict.witness.k
            if h.verdict.witness.eta is None:
                assert gcd(*k) == 1


class TestDeterminism:
    def test_workers(self):
        inst = InstanceSpec(PAIR, GroupSpec.of(2), F(1, 10), LogOf(10))
        one = scan_theorem12(inst, workers=1).to_json()
        assert scan_theorem12(inst, workers=3).to_json() == one
