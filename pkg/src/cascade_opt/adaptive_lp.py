"""Adaptive (support) method for linear programs with bounded variables.

Solves ``max c.x  s.t.  B x = b,  l <= x <= u`` exactly over rationals.  A
*support plan* pairs a feasible point ``x`` with a basis index set whose
columns are nonsingular; unlike the simplex method, ``x`` is not required to
be a basic solution, so the method can start from any feasible point and
return it untouched when it is already optimal.

Each iteration computes the reduced costs ``delta = c_B B_B^{-1} B - c`` and
the suboptimality estimate

    beta = sum_{j nonbasic, delta_j > 0} delta_j (x_j - l_j)
         + sum_{j nonbasic, delta_j < 0} delta_j (x_j - u_j)

which certifies ``c.x* - c.x <= beta``; the method stops exactly when
``beta = 0``.  Otherwise the nonbasic variable with the largest beta
contribution moves toward its favourable bound, blocked either by its own
bound (a long step, no basis change) or by a basic variable leaving the
basis.  After a degenerate (zero-length) step the entering rule switches to
smallest-index until the objective strictly improves again, which rules out
cycling.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import InvalidSupport
from .linalg import Mat, Vec, dot, solve_linear_system, vec

_ZERO = Fraction(0)
_ITERATION_CAP_FACTOR = 10_000


@dataclass(frozen=True)
class BoundedLp:
    """Standard-form bounded LP: max c.x, B x = b, l <= x <= u.

    ``B`` must have full row rank; every constructor in this package
    guarantees that by including an identity block.
    """

    B: Mat
    b: Vec
    c: Vec
    l: Vec
    u: Vec

    def __post_init__(self):
        m = len(self.B)
        n_total = len(self.B[0]) if m else 0
        if len(self.b) != m:
            raise InvalidSupport(f"rhs length {len(self.b)} != {m} rows")
        for name in ("c", "l", "u"):
            if len(getattr(self, name)) != n_total:
                raise InvalidSupport(f"{name} length != {n_total} columns")
        if not (0 < m < n_total):
            raise InvalidSupport(f"need 0 < rows ({m}) < columns ({n_total})")
        for j, (lo, hi) in enumerate(zip(self.l, self.u)):
            if lo > hi:
                raise InvalidSupport(f"empty bound box at column {j + 1}: {lo} > {hi}")

    @property
    def num_rows(self) -> int:
        return len(self.B)

    @property
    def num_cols(self) -> int:
        return len(self.B[0])

    def column(self, j: int) -> Vec:
        return tuple(row[j] for row in self.B)

    def objective_at(self, x: Sequence[Fraction]) -> Fraction:
        return dot(self.c, x)

    def is_feasible(self, x: Sequence[Fraction]) -> bool:
        if len(x) != self.num_cols:
            return False
        if any(not (lo <= v <= hi) for v, lo, hi in zip(x, self.l, self.u)):
            return False
        return all(dot(row, x) == rhs for row, rhs in zip(self.B, self.b))


@dataclass(frozen=True)
class SupportPlan:
    """A feasible point together with a nonsingular basis index set."""

    x: Vec
    basis: tuple[int, ...]


class LpStatus(Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class PivotRecord:
    """Snapshot of the plan *before* one pivot, for audit and certificates."""

    x: Vec
    basis: tuple[int, ...]
    objective: Fraction
    beta: Fraction
    entering: int
    leaving: int | None
    step: Fraction


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    x: Vec | None = None
    objective: Fraction | None = None
    support: SupportPlan | None = None
    iterations: int = 0
    trace: tuple[PivotRecord, ...] = field(default_factory=tuple)


def _basis_matrix(lp: BoundedLp, basis: Sequence[int]) -> Mat:
    return tuple(tuple(row[j] for j in basis) for row in lp.B)


def _dual_vector(lp: BoundedLp, basis: Sequence[int]) -> Vec | None:
    """y with y.B_j = c_j on basic columns, i.e. y = c_B B_B^{-T}."""
    bt = tuple(zip(*_basis_matrix(lp, basis)))
    return solve_linear_system(bt, tuple(lp.c[j] for j in basis))


def _reduced_costs(lp: BoundedLp, basis: Sequence[int], y: Vec) -> Vec:
    cols = tuple(zip(*lp.B))
    return tuple(dot(y, cols[j]) - lp.c[j] for j in range(lp.num_cols))


def suboptimality_estimate(lp: BoundedLp, plan: SupportPlan) -> tuple[Fraction, Vec]:
    """Exact gap bound beta and the full reduced-cost vector for a plan.

    Raises InvalidSupport when the basis columns are singular or the point
    infeasible; beta == 0 is the optimality criterion.
    """
    if sorted(set(plan.basis)) != sorted(plan.basis) or len(plan.basis) != lp.num_rows:
        raise InvalidSupport(f"basis must be {lp.num_rows} distinct column indexes")
    if not lp.is_feasible(plan.x):
        raise InvalidSupport("plan point is not feasible")
    y = _dual_vector(lp, plan.basis)
    if y is None:
        raise InvalidSupport("basis columns are singular")
    delta = _reduced_costs(lp, plan.basis, y)
    beta = _ZERO
    nonbasic = set(range(lp.num_cols)) - set(plan.basis)
    for j in sorted(nonbasic):
        if delta[j] > 0:
            beta += delta[j] * (plan.x[j] - lp.l[j])
        elif delta[j] < 0:
            beta += delta[j] * (plan.x[j] - lp.u[j])
    return beta, delta


def _greedy_basis(lp: BoundedLp, preferred: Iterable[int] = ()) -> tuple[int, ...] | None:
    """Deterministically pick num_rows independent columns, preferred first."""
    m = lp.num_rows
    order = list(dict.fromkeys(list(preferred) + list(range(lp.num_cols))))
    eliminators: list[tuple[int, list[Fraction]]] = []
    chosen: list[int] = []
    for j in order:
        col = [row[j] for row in lp.B]
        for pos, elim in eliminators:
            f = col[pos]
            if f != 0:
                col = [a - f * e for a, e in zip(col, elim)]
        piv = next((i for i, v in enumerate(col) if v != 0), None)
        if piv is None:
            continue
        inv = Fraction(1) / col[piv]
        newcol = [v * inv for v in col]
        for k, (pos, elim) in enumerate(eliminators):
            f = elim[piv]
            if f != 0:
                eliminators[k] = (pos, [a - f * nb for a, nb in zip(elim, newcol)])
        eliminators.append((piv, newcol))
        chosen.append(j)
        if len(chosen) == m:
            return tuple(chosen)
    return None


def support_from_point(lp: BoundedLp, x: Sequence[Fraction]) -> SupportPlan:
    """Attach a deterministic basis to a feasible point."""
    point = vec(x)
    if not lp.is_feasible(point):
        raise InvalidSupport("point is not feasible for the LP")
    basis = _greedy_basis(lp, preferred=range(lp.num_cols - lp.num_rows, lp.num_cols))
    if basis is None:
        raise InvalidSupport("constraint matrix is rank-deficient")
    return SupportPlan(point, basis)


def _box_midpoint(lp: BoundedLp) -> Vec:
    return tuple((lo + hi) / 2 for lo, hi in zip(lp.l, lp.u))


def find_initial_feasible(lp: BoundedLp) -> SupportPlan | None:
    """Feasible support plan, or None when the LP is infeasible.

    First tries assigning the trailing columns from the box midpoint of the
    rest (which succeeds immediately on freshly slackified problems); falls
    back to an auxiliary LP over signed artificial columns minimised by this
    same solver.
    """
    m, n_total = lp.num_rows, lp.num_cols
    mid = _box_midpoint(lp)

    tail = tuple(range(n_total - m, n_total))
    tail_matrix = _basis_matrix(lp, tail)
    head = tuple(j for j in range(n_total) if j not in set(tail))
    partial = tuple(
        rhs - dot(tuple(row[j] for j in head), tuple(mid[j] for j in head))
        for row, rhs in zip(lp.B, lp.b)
    )
    tail_values = solve_linear_system(tail_matrix, partial)
    if tail_values is not None:
        candidate = list(mid)
        for j, v in zip(tail, tail_values):
            candidate[j] = v
        if all(lo <= v <= hi for v, lo, hi in zip(candidate, lp.l, lp.u)):
            return SupportPlan(tuple(candidate), tail)

    residual = tuple(rhs - dot(row, mid) for row, rhs in zip(lp.B, lp.b))
    art_cols = tuple(
        tuple((Fraction(1) if residual[i] >= 0 else Fraction(-1)) if k == i else _ZERO for k in range(m))
        for i in range(m)
    )
    aux = BoundedLp(
        B=tuple(row + tuple(col[i] for col in art_cols) for i, row in enumerate(lp.B)),
        b=lp.b,
        c=(_ZERO,) * n_total + (Fraction(-1),) * m,
        l=lp.l + (_ZERO,) * m,
        u=lp.u + tuple(abs(r) for r in residual),
    )
    start = SupportPlan(
        mid + tuple(abs(r) for r in residual),
        tuple(range(n_total, n_total + m)),
    )
    outcome = solve_bounded_lp(aux, init=start)
    if outcome.status is not LpStatus.OPTIMAL or outcome.objective != 0:
        return None

    feasible = outcome.x[:n_total]
    seed = tuple(j for j in outcome.support.basis if j < n_total)
    basis = _greedy_basis(lp, preferred=seed)
    if basis is None:
        raise InvalidSupport("constraint matrix is rank-deficient")
    return SupportPlan(feasible, basis)


def solve_bounded_lp(lp: BoundedLp, init: SupportPlan | None = None) -> LpOutcome:
    """Run the adaptive method to a beta = 0 certificate.

    Deterministic for a given (lp, init); when ``init.x`` is already optimal
    it is returned unchanged (only the basis may be repaired).
    """
    if init is None:
        plan = find_initial_feasible(lp)
        if plan is None:
            return LpOutcome(status=LpStatus.INFEASIBLE)
    else:
        plan = init

    x = list(plan.x)
    basis = list(plan.basis)
    beta, delta = suboptimality_estimate(lp, SupportPlan(tuple(x), tuple(basis)))

    trace: list[PivotRecord] = []
    iterations = 0
    bland = False
    cap = _ITERATION_CAP_FACTOR * (lp.num_cols + lp.num_rows)

    while beta != 0:
        if iterations > cap:  # pragma: no cover - anti-cycling safeguard
            raise InvalidSupport("iteration cap exceeded; possible cycling")
        in_basis = set(basis)
        violators: list[tuple[int, Fraction]] = []
        for j in range(lp.num_cols):
            if j in in_basis:
                continue
            if delta[j] > 0 and x[j] > lp.l[j]:
                violators.append((j, delta[j] * (x[j] - lp.l[j])))
            elif delta[j] < 0 and x[j] < lp.u[j]:
                violators.append((j, delta[j] * (x[j] - lp.u[j])))
        if bland:
            entering = min(j for j, _ in violators)
        else:
            best = max(contrib for _, contrib in violators)
            entering = min(j for j, contrib in violators if contrib == best)
        sigma = 1 if delta[entering] < 0 else -1

        ray = solve_linear_system(_basis_matrix(lp, basis), lp.column(entering))
        if ray is None:  # pragma: no cover - basis kept nonsingular by pivoting
            raise InvalidSupport("basis became singular")

        step = lp.u[entering] - x[entering] if sigma > 0 else x[entering] - lp.l[entering]
        leaving_pos: int | None = None
        for pos, ji in enumerate(basis):
            rate = -sigma * ray[pos]
            if rate > 0:
                allowance = (lp.u[ji] - x[ji]) / rate
            elif rate < 0:
                allowance = (x[ji] - lp.l[ji]) / (-rate)
            else:
                continue
            if allowance < step or (
                allowance == step and leaving_pos is not None and ji < basis[leaving_pos]
            ):
                step = allowance
                leaving_pos = pos

        objective = lp.objective_at(x)
        leaving = basis[leaving_pos] if leaving_pos is not None else None
        trace.append(
            PivotRecord(tuple(x), tuple(basis), objective, beta, entering, leaving, step)
        )

        if step > 0:
            x[entering] += sigma * step
            for pos, ji in enumerate(basis):
                x[ji] += -sigma * ray[pos] * step
            bland = False
        else:
            bland = True
        if leaving_pos is not None:
            basis[leaving_pos] = entering
        iterations += 1
        beta, delta = suboptimality_estimate(lp, SupportPlan(tuple(x), tuple(basis)))

    final = SupportPlan(tuple(x), tuple(basis))
    return LpOutcome(
        status=LpStatus.OPTIMAL,
        x=final.x,
        objective=lp.objective_at(final.x),
        support=final,
        iterations=iterations,
        trace=tuple(trace),
    )
