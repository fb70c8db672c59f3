import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from muldep import lattice as lat

matrices = st.integers(1, 3).flatmap(
    lambda m: st.integers(1, 4).flatmap(
        lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=m, max_size=m)
    )
)


def test_kernel_examples():
    assert lat.integer_kernel([[2, 2]]) == [[1, -1]]
    ker = lat.integer_kernel([[1, 2, 3]])
    assert len(ker) == 2 and all(lat.matvec([[1, 2, 3]], v) == [0] for v in ker)
    assert lat.integer_kernel([[1, 0], [0, 1]]) == []


@given(matrices)
@settings(max_examples=80)
def test_kernel_is_saturated_basis(M):
    n = len(M[0])
    ker = lat.integer_kernel(M, n)
    for v in ker:
        assert lat.matvec(M, v) == [0] * len(M)
    # every small kernel vector is an integer combination of the basis
    for v in itertools.product(range(-2, 3), repeat=n):
        if any(v) and not any(lat.matvec(M, v)):
            sol, _ = lat.solve_integer(lat.transpose(ker), list(v), len(ker))
            assert sol is not None


@given(matrices, st.lists(st.integers(-4, 4), min_size=4, max_size=4))
@settings(max_examples=80)
def test_solve_integer(M, x):
    n = len(M[0])
    b = lat.matvec(M, x[:n])
    sol, ker = lat.solve_integer(M, b, n)
    assert sol is not None and lat.matvec(M, sol) == b


def test_solve_integer_detects_nonintegral():
    sol, ker = lat.solve_integer([[2, 4]], [3])
    assert sol is None and ker == [[2, -1]]


def test_hnf_orientations():
    rows = [[2, -1], [-2, 1]]
    assert lat.hnf(rows) == [[2, -1]]
    assert lat.reverse_hnf(rows) == [[-2, 1]]


def test_span_test_matrix():
    G = [[1], [2]]  # one column (1, 2)
    Q = lat.rational_span_test_matrix(G, 2)
    assert not any(lat.matvec(Q, [3, 6]))
    assert any(lat.matvec(Q, [1, 1]))


def test_solve_rational_unique():
    from fractions import Fraction

    assert lat.solve_rational_unique([[2], [4]], [1, 2]) == [Fraction(1, 2)]
    assert lat.solve_rational_unique([[2], [4]], [1, 3]) is None
