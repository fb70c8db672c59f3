"""Exact integer lattice routines: Hermite normal form, integer kernels,
and integer solutions of linear systems.

Matrices are lists of rows of Python ints; nothing here uses floating
point.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

Matrix = list[list[int]]


def _echelon(rows: Matrix, ncols: int) -> int:
    """Row-reduce ``rows`` in place on the first ``ncols`` columns.

    Only unimodular row operations are used.  Returns the rank r; rows
    [0, r) are in Hermite form on those columns (positive pivots, entries
    above a pivot reduced into [0, pivot)) and rows [r, end) vanish there.
    """
    r = 0
    nrows = len(rows)
    for c in range(ncols):
        if r == nrows:
            break
        while True:
            nz = [i for i in range(r, nrows) if rows[i][c] != 0]
            if not nz:
                break
            i0 = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[i0] = rows[i0], rows[r]
            piv = rows[r]
            clean = True
            for i in range(r + 1, nrows):
                a = rows[i][c]
                if a:
                    q = a // piv[c]
                    row = rows[i]
                    for j in range(len(row)):
                        row[j] -= q * piv[j]
                    if row[c]:
                        clean = False
            if clean:
                break
        if rows[r][c] == 0:
            continue
        if rows[r][c] < 0:
            rows[r] = [-v for v in rows[r]]
        piv = rows[r]
        for i in range(r):
            q = rows[i][c] // piv[c]
            if q:
                row = rows[i]
                for j in range(len(row)):
                    row[j] -= q * piv[j]
        r += 1
    return r


def hnf(vectors: Sequence[Sequence[int]]) -> Matrix:
    """Hermite normal form basis of the lattice spanned by ``vectors``."""
    rows = [list(map(int, v)) for v in vectors]
    if not rows:
        return []
    n = len(rows[0])
    r = _echelon(rows, n)
    return rows[:r]


def reverse_hnf(vectors: Sequence[Sequence[int]]) -> Matrix:
    """Hermite form taken from the last coordinate backwards.

    The first row then has its last nonzero entry positive.
    """
    rev = [list(reversed(list(v))) for v in vectors]
    return [list(reversed(row)) for row in hnf(rev)]


def transpose(M: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not M:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*M)]


def _augmented(M: Sequence[Sequence[int]], n: int) -> tuple[Matrix, int]:
    m = len(M)
    rows = []
    for i in range(n):
        rows.append([int(M[j][i]) for j in range(m)] + [1 if k == i else 0 for k in range(n)])
    return rows, m


def integer_kernel(M: Sequence[Sequence[int]], n: int | None = None) -> Matrix:
    """Basis (Hermite form) of {k in Z^n : M k = 0}; possibly empty.

    ``n`` is needed only when M has no rows.
    """
    if n is None:
        if not M:
            raise ValueError("column count unknown for an empty matrix")
        n = len(M[0])
    rows, m = _augmented(M, n)
    r = _echelon(rows, m)
    kernel = [row[m:] for row in rows[r:]]
    return hnf(kernel)


def solve_integer(
    M: Sequence[Sequence[int]], b: Sequence[int], n: int | None = None
) -> tuple[list[int] | None, Matrix]:
    """Integer solutions of M x = b: (particular or None, kernel basis)."""
    if n is None:
        if not M:
            raise ValueError("column count unknown for an empty matrix")
        n = len(M[0])
    rows, m = _augmented(M, n)
    r = _echelon(rows, m)
    kernel = hnf([row[m:] for row in rows[r:]])
    res = [int(v) for v in b]
    x = [0] * n
    for j in range(r):
        row = rows[j]
        c = next(i for i in range(m) if row[i] != 0)
        if res[c] % row[c]:
            return None, kernel
        y = res[c] // row[c]
        if y:
            for i in range(m):
                res[i] -= y * row[i]
            for i in range(n):
                x[i] += y * row[m + i]
    if any(res):
        return None, kernel
    return x, kernel


def rational_span_test_matrix(G: Sequence[Sequence[int]], nrows: int) -> Matrix:
    """Integer Q with Q v = 0 exactly when v lies in the Q-span of G's columns.

    G has ``nrows`` rows (possibly zero columns).
    """
    if not G or not G[0]:
        return [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    return integer_kernel(transpose(G), nrows)


def matvec(M: Sequence[Sequence[int]], v: Sequence) -> list:
    return [sum(a * b for a, b in zip(row, v)) for row in M]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    Bt = list(zip(*B)) if B else []
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def solve_rational_unique(B: Sequence[Sequence[int]], v: Sequence[int]) -> list[Fraction] | None:
    """Solve B u = v over Q for B of full column rank; None if inconsistent."""
    m = len(B)
    k = len(B[0]) if m else 0
    A = [[Fraction(x) for x in B[i]] + [Fraction(v[i])] for i in range(m)]
    row = 0
    pivots = []
    for c in range(k):
        p = next((i for i in range(row, m) if A[i][c] != 0), None)
        if p is None:
            raise ValueError("matrix is not of full column rank")
        A[row], A[p] = A[p], A[row]
        pv = A[row][c]
        A[row] = [x / pv for x in A[row]]
        for i in range(m):
            if i != row and A[i][c]:
                f = A[i][c]
                A[i] = [a - f * b for a, b in zip(A[i], A[row])]
        pivots.append(c)
        row += 1
    if any(A[i][k] for i in range(row, m)):
        return None
    return [A[i][k] for i in range(k)]


def vector_gcd(v: Sequence[int]) -> int:
    from math import gcd

    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def normalize_sign(v: Sequence[int], last: bool = False) -> list[int]:
    """Flip ``v`` so its first (or last) nonzero entry is positive."""
    seq = list(reversed(v)) if last else list(v)
    for x in seq:
        if x:
            return [-y for y in v] if x < 0 else list(v)
    return list(v)
