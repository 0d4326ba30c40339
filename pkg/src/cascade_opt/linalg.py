"""Dense exact linear algebra over tuples of Fractions.

Vectors are ``tuple[Fraction, ...]`` and matrices are tuples of row tuples,
so every value is immutable and safe to share.  Solving and rank use plain
Gaussian elimination with a largest-pivot heuristic; with exact rationals the
pivot choice only affects intermediate denominator growth, never correctness.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DimensionMismatch, EmptyInput

Vec = tuple[Fraction, ...]
Mat = tuple[Vec, ...]

ZERO = Fraction(0)
ONE = Fraction(1)


def vec(values: Iterable[Fraction | int]) -> Vec:
    return tuple(Fraction(v) for v in values)


def mat(rows: Iterable[Iterable[Fraction | int]]) -> Mat:
    out = tuple(vec(r) for r in rows)
    if out and any(len(r) != len(out[0]) for r in out):
        raise DimensionMismatch("ragged matrix rows")
    return out


def identity(n: int) -> Mat:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def zeros(n: int) -> Vec:
    return (ZERO,) * n


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise DimensionMismatch(f"dot of lengths {len(a)} and {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def mat_vec(m: Mat, x: Sequence[Fraction]) -> Vec:
    return tuple(dot(row, x) for row in m)


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m)) if m else ()


def hstack(left: Mat, right: Mat) -> Mat:
    if len(left) != len(right):
        raise DimensionMismatch("hstack with different row counts")
    return tuple(l + r for l, r in zip(left, right))


def columns(m: Mat, idx: Sequence[int]) -> Mat:
    """Rows-of-selected-columns submatrix (still row-major)."""
    return tuple(tuple(row[j] for j in idx) for row in m)


def _eliminate(rows: list[list[Fraction]], ncols: int) -> int:
    """In-place forward elimination; returns the rank.

    Pivots on the largest absolute entry in the current column to keep
    intermediate fractions small.
    """
    rank = 0
    for col in range(ncols):
        pivot_row = None
        pivot_abs = ZERO
        for r in range(rank, len(rows)):
            a = abs(rows[r][col])
            if a > pivot_abs:
                pivot_abs = a
                pivot_row = r
        if pivot_row is None:
            continue
        rows[rank], rows[pivot_row] = rows[pivot_row], rows[rank]
        prow = rows[rank]
        inv = ONE / prow[col]
        rows[rank] = prow = [v * inv for v in prow]
        for r in range(len(rows)):
            if r == rank:
                continue
            f = rows[r][col]
            if f != 0:
                rows[r] = [v - f * p for v, p in zip(rows[r], prow)]
        rank += 1
        if rank == len(rows):
            break
    return rank


def solve_linear_system(a: Mat, b: Sequence[Fraction]) -> Vec | None:
    """Solve the square system ``a x = b`` exactly; None when singular."""
    n = len(a)
    if any(len(row) != n for row in a):
        raise DimensionMismatch("solve_linear_system needs a square matrix")
    if len(b) != n:
        raise DimensionMismatch(f"rhs length {len(b)} != {n}")
    if n == 0:
        return ()
    aug = [list(row) + [rhs] for row, rhs in zip(a, b)]
    if _eliminate(aug, n) < n:
        return None
    return tuple(row[n] for row in aug)


def matrix_rank(m: Mat) -> int:
    if not m:
        return 0
    rows = [list(r) for r in m]
    return _eliminate(rows, len(m[0]))


def affine_dimension(points: Sequence[Sequence[Fraction]]) -> int:
    """Dimension of the affine hull: rank of differences from the first point."""
    if not points:
        raise EmptyInput("affine_dimension of no points")
    dim = len(points[0])
    if any(len(p) != dim for p in points):
        raise DimensionMismatch("points of mixed dimensions")
    base = points[0]
    diffs = tuple(tuple(x - y for x, y in zip(p, base)) for p in points[1:])
    return matrix_rank(diffs)
