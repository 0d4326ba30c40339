"""Vertex enumeration, efficiency classification, and compromise faces.

The feasible region ``{Ax <= b, x >= 0}`` is kept in inequality form as the
stacked system ``A_tilde x <= b_tilde`` whose first m rows are the structural
constraints and whose last n rows are the negated identity.  Vertices come
from exhaustive enumeration of row subsets; efficiency of a point for one
level is decided by a domination LP (zero optimum means undominated); and the
candidate compromise faces are tight-set intersections over subsets of the
commonly-efficient vertices, kept when their barycenter is efficient for
every level and inclusion-maximal among the survivors.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Sequence

from .adaptive_lp import BoundedLp, LpStatus, SupportPlan, solve_bounded_lp
from .errors import (
    DimensionMismatch,
    EmptyCompromiseSet,
    EmptyPolytope,
    InfeasibleRegion,
    UnboundedPolytope,
)
from .linalg import Mat, Vec, affine_dimension, dot, solve_linear_system
from .scalarize import DEFAULT_BIG_M, LevelObjectives

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class Vertex:
    coords: Vec
    tight: tuple[int, ...]  # 0-based rows of A_tilde holding with equality


@dataclass(frozen=True)
class Face:
    """A face F(Q) of the feasible region together with its classification."""

    q: tuple[int, ...]
    vertices: tuple[Vertex, ...]
    dim: int
    barycenter: Vec
    efficient_for: tuple[int, ...]


@dataclass(frozen=True)
class CompromiseSet:
    n_hat_dex: tuple[Vertex, ...]
    maximal_faces: tuple[Face, ...]
    per_level_dex: tuple[tuple[Vertex, ...], ...]


class Polytope:
    """Bounded region {Ax <= b, x >= 0} with cached vertex enumeration."""

    def __init__(self, A: Mat, b: Vec):
        m = len(A)
        n = len(A[0]) if m else 0
        if n == 0:
            raise DimensionMismatch("constraint matrix needs at least one column")
        if any(len(row) != n for row in A):
            raise DimensionMismatch("ragged constraint matrix")
        if len(b) != m:
            raise DimensionMismatch(f"b has {len(b)} entries for {m} rows")
        self.A = A
        self.b = b
        self.num_vars = n
        self.a_tilde: Mat = tuple(A) + tuple(
            tuple(-_ONE if k == j else _ZERO for k in range(n)) for j in range(n)
        )
        self.b_tilde: Vec = tuple(b) + (_ZERO,) * n
        self._vertices: tuple[Vertex, ...] | None = None

    @property
    def num_rows(self) -> int:
        return len(self.a_tilde)

    def contains(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_vars:
            return False
        return all(dot(row, x) <= rhs for row, rhs in zip(self.a_tilde, self.b_tilde))

    def tight_set(self, x: Sequence[Fraction]) -> tuple[int, ...]:
        return tuple(
            i for i, (row, rhs) in enumerate(zip(self.a_tilde, self.b_tilde))
            if dot(row, x) == rhs
        )

    def _check_bounded(self) -> None:
        # a nonzero recession direction d >= 0 with Ad <= 0 exists iff the
        # boxed LP max 1.d over {Ad + s = 0, 0 <= d <= 1} has positive value
        m, n = len(self.A), self.num_vars
        if m == 0:
            raise UnboundedPolytope("no structural constraints: region is the whole orthant")
        B = tuple(
            row + tuple(_ONE if k == i else _ZERO for k in range(m))
            for i, row in enumerate(self.A)
        )
        slack_cap = tuple(
            sum((max(_ZERO, -a) for a in row), _ZERO) for row in self.A
        )
        lp = BoundedLp(
            B=B,
            b=(_ZERO,) * m,
            c=(_ONE,) * n + (_ZERO,) * m,
            l=(_ZERO,) * (n + m),
            u=(_ONE,) * n + slack_cap,
        )
        seed = SupportPlan((_ZERO,) * (n + m), tuple(range(n, n + m)))
        outcome = solve_bounded_lp(lp, init=seed)
        if outcome.objective > 0:
            direction = outcome.x[:n]
            raise UnboundedPolytope(f"unbounded along direction {direction}")

    def vertices(self) -> tuple[Vertex, ...]:
        if self._vertices is None:
            self._check_bounded()
            n = self.num_vars
            seen: dict[Vec, Vertex] = {}
            for rows in combinations(range(self.num_rows), n):
                square = tuple(self.a_tilde[i] for i in rows)
                rhs = tuple(self.b_tilde[i] for i in rows)
                point = solve_linear_system(square, rhs)
                if point is None or not self.contains(point):
                    continue
                if point not in seen:
                    seen[point] = Vertex(point, self.tight_set(point))
            if not seen:
                raise EmptyPolytope("feasible region is empty")
            ordered = sorted(seen, reverse=True)
            self._vertices = tuple(seen[p] for p in ordered)
        return self._vertices


def enumerate_vertices(poly: Polytope) -> tuple[Vertex, ...]:
    """All extreme points, descending by coordinates, with full tight sets."""
    return poly.vertices()


@dataclass(frozen=True)
class EfficiencyResult:
    efficient: bool
    dominator: Vec | None


def efficiency_test(
    x: Sequence[Fraction],
    level: LevelObjectives,
    poly: Polytope,
    big_m: Fraction = DEFAULT_BIG_M,
) -> EfficiencyResult:
    """Decide whether any feasible point dominates x for this level.

    Solves max 1.w over {c y - w = c x, y in S, w >= 0}; the point is
    efficient exactly when the optimum is zero, otherwise the optimal y is
    returned as a dominating certificate.
    """
    if not poly.contains(x):
        raise InfeasibleRegion("efficiency test needs a feasible point")
    n = poly.num_vars
    m = len(poly.A)
    k = level.count
    base = tuple(dot(row[:n], x) for row in level.rows)

    # variables: y (n) | slack of Ay <= b (m) | w (k)
    rows = []
    for i, row in enumerate(poly.A):
        rows.append(
            row
            + tuple(_ONE if t == i else _ZERO for t in range(m))
            + (_ZERO,) * k
        )
    for q, row in enumerate(level.rows):
        rows.append(
            tuple(row[:n])
            + (_ZERO,) * m
            + tuple(-_ONE if t == q else _ZERO for t in range(k))
        )
    lp = BoundedLp(
        B=tuple(rows),
        b=tuple(poly.b) + base,
        c=(_ZERO,) * (n + m) + (_ONE,) * k,
        l=(_ZERO,) * (n + m + k),
        u=(big_m,) * (n + m + k),
    )
    slack0 = tuple(rhs - dot(row[:n], x) for row, rhs in zip(poly.A, poly.b))
    seed = SupportPlan(
        tuple(x) + slack0 + (_ZERO,) * k,
        tuple(range(n, n + m + k)),
    )
    outcome = solve_bounded_lp(lp, init=seed)
    if outcome.status is not LpStatus.OPTIMAL:  # pragma: no cover - seeded
        raise InfeasibleRegion("domination LP unexpectedly failed")
    if outcome.objective == 0:
        return EfficiencyResult(True, None)
    return EfficiencyResult(False, outcome.x[:n])


def efficient_extreme_points(
    level: LevelObjectives,
    poly: Polytope,
    big_m: Fraction = DEFAULT_BIG_M,
) -> tuple[Vertex, ...]:
    return tuple(
        v for v in poly.vertices() if efficiency_test(v.coords, level, poly, big_m).efficient
    )


def common_efficient_extremes(
    per_level: Sequence[Sequence[Vertex]],
) -> tuple[Vertex, ...]:
    """Coordinate-wise intersection of the per-level efficient vertex sets."""
    if not per_level:
        return ()
    shared = set(v.coords for v in per_level[0])
    for level_set in per_level[1:]:
        shared &= set(v.coords for v in level_set)
    return tuple(v for v in per_level[0] if v.coords in shared)


def compromise_faces(
    poly: Polytope,
    levels: Sequence[LevelObjectives],
    per_level_dex: Sequence[Sequence[Vertex]],
    big_m: Fraction = DEFAULT_BIG_M,
) -> CompromiseSet:
    """Inclusion-maximal faces that are efficient for every level.

    Candidate faces are tight-set intersections over subsets of the common
    efficient vertices; a candidate survives when the barycenter of its
    vertex set passes the efficiency test for every level, and afterwards
    only faces whose defining row set contains no other survivor's row set
    are kept.
    """
    common = common_efficient_extremes(per_level_dex)
    if not common:
        raise EmptyCompromiseSet("no vertex is efficient for every level")

    all_vertices = poly.vertices()
    by_coords = {v.coords: v for v in all_vertices}
    candidates: dict[tuple[Vec, ...], tuple[int, ...]] = {}
    for size in range(1, len(common) + 1):
        for sub in combinations(common, size):
            q = set(sub[0].tight)
            for v in sub[1:]:
                q &= set(v.tight)
            members = tuple(v for v in all_vertices if q <= set(v.tight))
            canonical = set(members[0].tight)
            for v in members[1:]:
                canonical &= set(v.tight)
            candidates[tuple(v.coords for v in members)] = tuple(sorted(canonical))

    kept: list[Face] = []
    for member_coords, q in candidates.items():
        members = tuple(by_coords[c] for c in member_coords)
        count = len(members)
        bary = tuple(
            sum((c[j] for c in member_coords), _ZERO) / count
            for j in range(poly.num_vars)
        )
        passing = [
            level.index
            for level in levels
            if efficiency_test(bary, level, poly, big_m).efficient
        ]
        if len(passing) == len(levels):
            kept.append(
                Face(
                    q=q,
                    vertices=members,
                    dim=affine_dimension(member_coords),
                    barycenter=bary,
                    efficient_for=tuple(passing),
                )
            )

    maximal = [
        face
        for face in kept
        if not any(set(other.q) < set(face.q) for other in kept if other.q != face.q)
    ]
    if not maximal:
        raise EmptyCompromiseSet("no face survives the all-levels efficiency test")
    maximal.sort(
        key=lambda f: (-f.dim, tuple(tuple(-c for c in v.coords) for v in f.vertices))
    )
    return CompromiseSet(
        n_hat_dex=common,
        maximal_faces=tuple(maximal),
        per_level_dex=tuple(tuple(s) for s in per_level_dex),
    )


def sorting_sets(cs: CompromiseSet) -> tuple[Face, ...]:
    """Sorting-set candidates: the maximal faces, largest and topmost first."""
    return cs.maximal_faces


def analyze(
    A: Mat,
    b: Vec,
    levels: Sequence[LevelObjectives],
    big_m: Fraction = DEFAULT_BIG_M,
) -> tuple[Polytope, CompromiseSet]:
    """Full first phase: enumerate, classify per level, intersect, build faces."""
    poly = Polytope(A, b)
    per_level = tuple(efficient_extreme_points(level, poly, big_m) for level in levels)
    return poly, compromise_faces(poly, levels, per_level, big_m)
