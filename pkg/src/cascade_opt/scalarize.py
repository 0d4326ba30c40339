"""Weighted scalarization of one level's multiobjective LP.

The pipeline per level: slackify ``Ax <= b`` into equality form with boxed
slack variables, derive strictly positive weights from an auxiliary LP around
the current feasible point, then maximise the weighted objective with the
adaptive solver.  The weights come from the dual of the classical efficiency
test ``max 1.c_p y  s.t.  y feasible, c_p y >= c_p x0``: its multipliers
``r >= 0`` on the domination rows give ``weights = r + 1``, which makes an
efficient starting point optimal for the weighted problem, so the solver
hands it back unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .adaptive_lp import (
    BoundedLp,
    LpOutcome,
    LpStatus,
    SupportPlan,
    find_initial_feasible,
    solve_bounded_lp,
    support_from_point,
)
from .errors import (
    AuxiliaryInfeasible,
    AuxiliaryUnboundedAfterRetries,
    DimensionMismatch,
    InfeasibleRegion,
)
from .linalg import Mat, Vec, dot, mat_vec, vec

_ZERO = Fraction(0)
_ONE = Fraction(1)

DEFAULT_BIG_M = Fraction(10**6)


@dataclass(frozen=True)
class LevelObjectives:
    """Objective rows of one decision level over the full variable vector."""

    index: int
    rows: Mat

    def __post_init__(self):
        if self.index < 1:
            raise DimensionMismatch("level index is 1-based")
        if not self.rows:
            raise DimensionMismatch(f"level {self.index} needs at least one objective")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise DimensionMismatch(f"level {self.index} objective rows have mixed widths")

    @property
    def count(self) -> int:
        return len(self.rows)

    def values_at(self, x: Sequence[Fraction]) -> Vec:
        return tuple(dot(row, x[: len(row)]) for row in self.rows)


@dataclass(frozen=True)
class WeightVector:
    values: Vec

    def __post_init__(self):
        if any(v < 1 for v in self.values):
            raise AuxiliaryInfeasible("scalarization weights must all be >= 1")


@dataclass(frozen=True)
class AuxSolution:
    """Optimal point of the weight-deriving auxiliary LP (min form value)."""

    y: Vec
    r: Vec
    v: Vec
    w: Vec
    objective: Fraction


@dataclass(frozen=True)
class SlackifiedLevel:
    """Equality form of one level: B = (A | Id), slack box [0, big_m]."""

    B: Mat
    b: Vec
    c_rows: Mat
    l: Vec
    u: Vec
    num_structural: int
    big_m: Fraction
    equality_rows: int = 0

    @property
    def num_rows(self) -> int:
        return len(self.B)

    @property
    def num_cols(self) -> int:
        return len(self.B[0])

    def weighted_lp(self, weights: WeightVector) -> BoundedLp:
        if len(weights.values) != len(self.c_rows):
            raise DimensionMismatch("one weight per objective row required")
        combined = tuple(
            sum((w * row[j] for w, row in zip(weights.values, self.c_rows)), _ZERO)
            for j in range(self.num_cols)
        )
        return BoundedLp(B=self.B, b=self.b, c=combined, l=self.l, u=self.u)

    def feasibility_lp(self) -> BoundedLp:
        return BoundedLp(B=self.B, b=self.b, c=(_ZERO,) * self.num_cols, l=self.l, u=self.u)

    def extend_point(self, x: Sequence[Fraction]) -> Vec:
        """Append slack values to a structural point; errors if out of range."""
        n = self.num_structural
        if len(x) != n:
            raise DimensionMismatch(f"expected {n} structural values, got {len(x)}")
        slacks = tuple(
            rhs - dot(row[:n], x) for row, rhs in zip(self.B, self.b)
        )
        full = tuple(x) + slacks
        for j, (v, lo, hi) in enumerate(zip(full, self.l, self.u)):
            if not (lo <= v <= hi):
                raise InfeasibleRegion(
                    f"point violates bound {lo} <= x[{j + 1}] <= {hi} (value {v})"
                )
        return full


def slackify(
    A: Mat,
    b: Vec,
    c_rows: Mat,
    l: Vec,
    u: Vec,
    big_m: Fraction = DEFAULT_BIG_M,
    equalities: tuple[Mat, Vec] | None = None,
) -> SlackifiedLevel:
    """Turn max c_rows.x over {Ax <= b, l <= x <= u} into bounded equality form.

    Optional ``equalities`` rows are appended with zero-width slack boxes,
    which pins them to exact equality (used by the strict sorting-set mode).
    """
    if big_m <= 0:
        raise DimensionMismatch("big_m must be positive")
    m, n = len(A), len(A[0]) if A else 0
    if len(b) != m:
        raise DimensionMismatch(f"b has {len(b)} entries, A has {m} rows")
    if any(len(row) != n for row in A):
        raise DimensionMismatch("ragged constraint matrix")
    if any(len(row) != n for row in c_rows):
        raise DimensionMismatch(f"objective rows must have {n} columns")
    if len(l) != n or len(u) != n:
        raise DimensionMismatch(f"bounds must have {n} entries")
    if any(lo > hi for lo, hi in zip(l, u)):
        raise DimensionMismatch("lower bound exceeds upper bound")

    eq_rows: Mat = ()
    eq_rhs: Vec = ()
    if equalities is not None:
        eq_rows, eq_rhs = equalities
        if any(len(r) != n for r in eq_rows) or len(eq_rows) != len(eq_rhs):
            raise DimensionMismatch("malformed equality rows")

    all_rows = tuple(A) + tuple(eq_rows)
    all_rhs = tuple(b) + tuple(eq_rhs)
    total = len(all_rows)
    B = tuple(
        row + tuple(_ONE if k == i else _ZERO for k in range(total))
        for i, row in enumerate(all_rows)
    )
    slack_hi = tuple(big_m if i < m else _ZERO for i in range(total))
    return SlackifiedLevel(
        B=B,
        b=all_rhs,
        c_rows=tuple(row + (_ZERO,) * total for row in c_rows),
        l=l + (_ZERO,) * total,
        u=u + slack_hi,
        num_structural=n,
        big_m=big_m,
        equality_rows=len(eq_rows),
    )


def auxiliary_weights(
    level_lp: SlackifiedLevel,
    x0: Sequence[Fraction],
    max_retries: int = 3,
) -> tuple[WeightVector, AuxSolution]:
    """Derive weights >= 1 from the auxiliary LP around the feasible point x0.

    Free variables are boxed at the big-M scale; if any artificial box bound
    is active at the optimum the box doubles and the solve retries, and after
    ``max_retries`` doublings the LP is declared unbounded.
    """
    if len(x0) != level_lp.num_cols:
        raise DimensionMismatch("x0 must include slack values; use extend_point")
    k = len(level_lp.c_rows)
    m, n_cols = level_lp.num_rows, level_lp.num_cols
    cols = tuple(zip(*level_lp.B))
    target = tuple(
        sum((row[j] for row in level_lp.c_rows), _ZERO) for j in range(n_cols)
    )
    objective_at_x0 = tuple(dot(row, x0) for row in level_lp.c_rows)

    # constraint rows, one per column j of B:
    #   (col_j of B).y  -  (c_rows[:,j]).r  -  v_j  +  w_j  =  sum_q c_rows[q][j]
    rows = []
    for j in range(n_cols):
        row = list(cols[j])
        row += [-level_lp.c_rows[q][j] for q in range(k)]
        row += [-_ONE if i == j else _ZERO for i in range(n_cols)]
        row += [_ONE if i == j else _ZERO for i in range(n_cols)]
        rows.append(tuple(row))
    B = tuple(rows)
    # minimise y.b - r.(c x0) - v.l + w.u, i.e. maximise the negation
    cost = (
        tuple(-v for v in level_lp.b)
        + objective_at_x0
        + level_lp.l
        + tuple(-v for v in level_lp.u)
    )

    box = max(
        level_lp.big_m,
        2 * max((abs(t) for t in target), default=_ONE),
        _ONE,
    )
    for attempt in range(max_retries + 1):
        lower = (-box,) * m + (_ZERO,) * (k + 2 * n_cols)
        upper = (box,) * (m + k + 2 * n_cols)
        lp = BoundedLp(B=B, b=target, c=cost, l=lower, u=upper)
        seed_v = tuple(max(_ZERO, -t) for t in target)
        seed_w = tuple(max(_ZERO, t) for t in target)
        seed = (_ZERO,) * (m + k) + seed_v + seed_w
        plan = SupportPlan(seed, tuple(range(m + k + n_cols, m + k + 2 * n_cols)))
        outcome = solve_bounded_lp(lp, init=plan)
        if outcome.status is not LpStatus.OPTIMAL:  # pragma: no cover - seeded
            raise AuxiliaryInfeasible("auxiliary weight LP did not solve")

        y = outcome.x[:m]
        r = outcome.x[m : m + k]
        v = list(outcome.x[m + k : m + k + n_cols])
        w = list(outcome.x[m + k + n_cols :])
        # min(v_j, w_j) can be drained without changing optimality; doing so
        # keeps spurious box contacts from triggering a pointless retry.
        for j in range(n_cols):
            drain = min(v[j], w[j])
            if drain > 0:
                v[j] -= drain
                w[j] -= drain
        at_box = (
            any(abs(val) == box for val in y)
            or any(val == box for val in r)
            or any(val == box for val in v)
            or any(val == box for val in w)
        )
        if not at_box:
            aux = AuxSolution(
                y=y,
                r=r,
                v=tuple(v),
                w=tuple(w),
                objective=-outcome.objective,
            )
            return WeightVector(tuple(val + _ONE for val in r)), aux
        box *= 2
    raise AuxiliaryUnboundedAfterRetries(
        f"auxiliary LP still touches its artificial box after {max_retries} retries"
    )


@dataclass(frozen=True)
class MolpResult:
    x: Vec
    weights: WeightVector
    aux: AuxSolution
    outcome: LpOutcome
    level_lp: SlackifiedLevel

    @property
    def objective_values(self) -> Vec:
        return tuple(dot(row, self.outcome.x) for row in self.level_lp.c_rows)


def solve_molp(
    level: LevelObjectives,
    A: Mat,
    b: Vec,
    l: Vec,
    u: Vec,
    x0: Sequence[Fraction] | None = None,
    big_m: Fraction = DEFAULT_BIG_M,
    equalities: tuple[Mat, Vec] | None = None,
) -> MolpResult:
    """Solve one level's multiobjective LP over the boxed region.

    Runs the full chain: feasible start (given or found), auxiliary weights,
    then the weighted LP seeded at the start so an already-efficient start is
    returned verbatim.  Raises InfeasibleRegion when the region is empty.
    """
    level_lp = slackify(A, b, level.rows, l, u, big_m=big_m, equalities=equalities)
    if x0 is not None:
        full0 = level_lp.extend_point(vec(x0))
        plan0 = support_from_point(level_lp.feasibility_lp(), full0)
    else:
        plan0 = find_initial_feasible(level_lp.feasibility_lp())
        if plan0 is None:
            raise InfeasibleRegion("level region {Ax <= b, l <= x <= u} is empty")
        full0 = plan0.x

    weights, aux = auxiliary_weights(level_lp, full0)
    weighted = level_lp.weighted_lp(weights)
    outcome = solve_bounded_lp(weighted, init=SupportPlan(full0, plan0.basis))
    if outcome.status is not LpStatus.OPTIMAL:  # pragma: no cover - seeded
        raise InfeasibleRegion("weighted LP unexpectedly failed")
    return MolpResult(
        x=outcome.x[: level_lp.num_structural],
        weights=weights,
        aux=aux,
        outcome=outcome,
        level_lp=level_lp,
    )
