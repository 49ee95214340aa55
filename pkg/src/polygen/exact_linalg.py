"""Arbitrary-precision integer and rational linear algebra.

Scalars are Python ``int`` and ``fractions.Fraction`` (always stored reduced
with positive denominator), so nothing in this module ever touches floating
point.  Matrices are tuples of equal-length tuples in row-major order.  These
are the kernels the geometry, equivalence and property-checking modules are
built on: exact determinants, row-style Hermite normal form with transform,
exact linear solves, and primitive integer directions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

from .errors import NonSquareMatrixError, SingularMatrixError, ZeroVectorError

IntVec = tuple[int, ...]
IntMat = tuple[IntVec, ...]
RatVec = tuple[Fraction, ...]

Scalar = int | Fraction


def as_int_matrix(rows: Iterable[Iterable[int]]) -> IntMat:
    """Validate and freeze *rows* into the canonical matrix form.

    Requires at least one row, at least one column and equal row lengths.
    """
    mat = tuple(tuple(int(x) for x in row) for row in rows)
    if not mat or not mat[0]:
        raise ValueError("matrix must have at least one row and one column")
    width = len(mat[0])
    if any(len(row) != width for row in mat):
        raise ValueError("ragged matrix: rows have unequal lengths")
    return mat


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def dot(u: Sequence[Scalar], v: Sequence[Scalar]) -> Scalar:
    return sum(a * b for a, b in zip(u, v))


def mat_vec(m: Sequence[Sequence[Scalar]], v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Sequence[Sequence[Scalar]], b: Sequence[Sequence[Scalar]]) -> tuple[tuple[Scalar, ...], ...]:
    cols = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in cols) for row in a)


def vec_add(u: Sequence[Scalar], v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u: Sequence[Scalar], v: Sequence[Scalar]) -> tuple[Scalar, ...]:
    return tuple(a - b for a, b in zip(u, v))


def det(m: Sequence[Sequence[int]]) -> int:
    """Exact determinant of a square integer matrix.

    Fraction-free (Bareiss) elimination: every intermediate entry is an
    integer and every division is exact, so there is no coefficient blowup
    beyond the minors themselves.
    """
    a = [list(map(int, row)) for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise NonSquareMatrixError(f"determinant needs a square matrix, got {len(a)}x{len(a[0])}")
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            pivot_row = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if pivot_row is None:
                return 0
            a[k], a[pivot_row] = a[pivot_row], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def is_unimodular(m: Sequence[Sequence[int]]) -> bool:
    try:
        return abs(det(m)) == 1
    except NonSquareMatrixError:
        return False


def hnf(m: Sequence[Sequence[int]]) -> tuple[IntMat, IntMat]:
    """Row-style Hermite normal form ``H`` with unimodular ``U``, ``H = U @ m``.

    Convention: pivots positive, entries above each pivot reduced into
    ``[0, pivot)``, entries below zero, pivot columns strictly increasing,
    zero rows at the bottom.  This fixed convention makes H a canonical key:
    ``hnf(H) == (H, I)`` for any H already in form.
    """
    rows = [list(map(int, row)) for row in as_int_matrix(m)]
    nr, nc = len(rows), len(rows[0])
    u = [list(row) for row in identity(nr)]

    def row_op(i: int, j: int, q: int) -> None:
        # rows[i] -= q * rows[j], mirrored on u
        if q == 0:
            return
        rows[i] = [a - q * b for a, b in zip(rows[i], rows[j])]
        u[i] = [a - q * b for a, b in zip(u[i], u[j])]

    r = 0
    for c in range(nc):
        # Euclidean elimination in column c on rows r..nr-1.
        while True:
            nonzero = [i for i in range(r, nr) if rows[i][c] != 0]
            if not nonzero:
                pivot = None
                break
            best = min(nonzero, key=lambda i: (abs(rows[i][c]), i))
            if len(nonzero) == 1:
                pivot = best
                break
            for i in nonzero:
                if i != best:
                    row_op(i, best, rows[i][c] // rows[best][c])
        if pivot is None:
            continue
        if pivot != r:
            rows[r], rows[pivot] = rows[pivot], rows[r]
            u[r], u[pivot] = u[pivot], u[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
            u[r] = [-x for x in u[r]]
        p = rows[r][c]
        for i in range(r):
            row_op(i, r, rows[i][c] // p)
        r += 1
        if r == nr:
            break
    return tuple(tuple(row) for row in rows), tuple(tuple(row) for row in u)


def solve(a: Sequence[Sequence[Scalar]], b: Sequence[Scalar]) -> RatVec:
    """Exact solution of the square system ``a @ x = b`` over the rationals.

    Raises SingularMatrixError when no unique solution exists.
    """
    n = len(a)
    if any(len(row) != n for row in a) or len(b) != n:
        raise NonSquareMatrixError("solve needs a square system")
    aug = [[Fraction(x) for x in row] + [Fraction(y)] for row, y in zip(a, b)]
    for col in range(n):
        pivot_row = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if pivot_row is None:
            raise SingularMatrixError("singular matrix")
        aug[col], aug[pivot_row] = aug[pivot_row], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return tuple(aug[r][n] for r in range(n))


def inverse(m: Sequence[Sequence[Scalar]]) -> tuple[RatVec, ...]:
    """Exact inverse of a square matrix (rows of Fractions)."""
    n = len(m)
    cols = [solve(m, tuple(1 if i == j else 0 for i in range(n))) for j in range(n)]
    return tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))


def rank(m: Sequence[Sequence[Scalar]]) -> int:
    """Rank over the rationals by exact Gaussian elimination."""
    rows = [[Fraction(x) for x in row] for row in m]
    if not rows:
        return 0
    nc = len(rows[0])
    rk = 0
    for col in range(nc):
        pivot_row = next((r for r in range(rk, len(rows)) if rows[r][col] != 0), None)
        if pivot_row is None:
            continue
        rows[rk], rows[pivot_row] = rows[pivot_row], rows[rk]
        inv = 1 / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for r in range(len(rows)):
            if r != rk and rows[r][col]:
                f = rows[r][col]
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[rk])]
        rk += 1
        if rk == len(rows):
            break
    return rk


def vec_gcd(v: Iterable[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v: Sequence[Scalar]) -> IntVec:
    """Shortest integer vector parallel to *v* pointing the same way.

    Clears denominators, divides out the gcd; the result has coprime
    coordinates.  Rejects the zero vector.
    """
    fracs = [Fraction(x) for x in v]
    if all(x == 0 for x in fracs):
        raise ZeroVectorError("primitive direction of the zero vector is undefined")
    denom_lcm = 1
    for x in fracs:
        denom_lcm = denom_lcm * x.denominator // gcd(denom_lcm, x.denominator)
    ints = [int(x * denom_lcm) for x in fracs]
    g = vec_gcd(ints)
    return tuple(x // g for x in ints)
