"""Multilevel driver: bounds from the sorting set, per-level solves, DM slacks.

The second phase walks the hierarchy once.  Bounds start at the componentwise
min/max of the chosen sorting set's extreme points; after each level's solve
the acting decision maker narrows the bounds of the variables they own by
strictly positive slack half-widths, which must stay inside the initial box
(inclusive).  The whole walk is modelled as an immutable session state with
phases AwaitSortingSet -> AwaitSolve -> (AwaitSlacks -> AwaitSolve)* -> Done;
invalid calls raise without mutating anything, and the batch runner drives
the very same transitions so interactive and batch traces coincide.
"""
from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Sequence

from .errors import (
    AssumptionViolated,
    CascadeOptError,
    DimensionMismatch,
    DmBoundsViolation,
    EmptySortingSet,
    InfeasibleRegion,
    InvalidSortingIndex,
    NonPositiveSlack,
    PhaseError,
)
from .geometry import CompromiseSet, Face, Polytope, Vertex, analyze, sorting_sets
from .linalg import Mat, Vec, dot, vec
from .rationals import format_rational, format_vector
from .scalarize import DEFAULT_BIG_M, LevelObjectives, MolpResult, solve_molp

_ZERO = Fraction(0)


@dataclass(frozen=True)
class MlProblem:
    """P-level multiobjective LP over shared constraints Ax <= b, x >= 0.

    ``owned[p-1]`` is the number of consecutive variables controlled by the
    level-p decision maker; the blocks partition the variable vector.
    """

    levels: tuple[LevelObjectives, ...]
    owned: tuple[int, ...]
    A: Mat
    b: Vec

    def __post_init__(self):
        if not self.levels:
            raise DimensionMismatch("a problem needs at least one level")
        if len(self.owned) != len(self.levels):
            raise DimensionMismatch("one variable count per level required")
        if any(c < 1 for c in self.owned):
            raise DimensionMismatch("every level must own at least one variable")
        n = len(self.A[0]) if self.A else 0
        if sum(self.owned) != n:
            raise DimensionMismatch(
                f"owned variable counts sum to {sum(self.owned)}, constraints have {n} columns"
            )
        for pos, level in enumerate(self.levels):
            if level.index != pos + 1:
                raise DimensionMismatch("levels must be numbered 1..P in order")
            if len(level.rows[0]) != n:
                raise DimensionMismatch(
                    f"level {level.index} objective rows must have {n} columns"
                )
        if len(self.b) != len(self.A):
            raise DimensionMismatch("b length must match the number of constraint rows")

    @property
    def num_levels(self) -> int:
        return len(self.levels)

    @property
    def num_vars(self) -> int:
        return sum(self.owned)

    @property
    def num_constraints(self) -> int:
        return len(self.A)

    def ownership_range(self, p: int) -> range:
        start = sum(self.owned[: p - 1])
        return range(start, start + self.owned[p - 1])


@dataclass(frozen=True)
class DmSlacks:
    """Strictly positive half-widths around a level's compromise."""

    level: int
    lower: Vec
    upper: Vec

    def __post_init__(self):
        if len(self.lower) != len(self.upper):
            raise DimensionMismatch("slack vectors must have equal lengths")
        for j, (lo, hi) in enumerate(zip(self.lower, self.upper)):
            if lo <= 0 or hi <= 0:
                raise NonPositiveSlack(
                    f"slack parameters must be positive; component {j + 1} is not"
                )


class Phase(str, Enum):
    AWAIT_SORTING_SET = "await_sorting_set"
    AWAIT_SOLVE = "await_solve"
    AWAIT_SLACKS = "await_slacks"
    DONE = "done"


@dataclass(frozen=True, eq=False)
class SessionState:
    problem: MlProblem
    polytope: Polytope
    geometry: CompromiseSet
    big_m: Fraction
    strict_sp: bool
    phase: Phase
    sorting_index: int | None = None
    sorting_face: Face | None = None
    card_spdex: int | None = None
    bounds_initial: tuple[Vec, Vec] | None = None
    bounds_current: tuple[Vec, Vec] | None = None
    current_level: int = 1
    compromises: tuple[Vec, ...] = ()
    results: tuple[MolpResult, ...] = ()
    trace: tuple[dict, ...] = ()

    def require_phase(self, expected: Phase, action: str) -> None:
        if self.phase is not expected:
            raise PhaseError(
                f"{action} requires phase {expected.value}, session is at {self.phase.value}",
                phase=self.phase.value,
            )


@dataclass(frozen=True)
class FinalCompromise:
    x: Vec
    objective_values: tuple[Vec, ...]
    trace: tuple[dict, ...]


def initial_bounds(spdex: Sequence[Vertex]) -> tuple[Vec, Vec]:
    """Componentwise min/max over the sorting set's extreme points."""
    if not spdex:
        raise EmptySortingSet("sorting set has no extreme points")
    coords = [v.coords for v in spdex]
    n = len(coords[0])
    lower = tuple(min(c[j] for c in coords) for j in range(n))
    upper = tuple(max(c[j] for c in coords) for j in range(n))
    return lower, upper


def _phase1_record(geometry: CompromiseSet) -> dict:
    return {
        "common_efficient": [format_vector(v.coords) for v in geometry.n_hat_dex],
        "per_level_efficient": [
            [format_vector(v.coords) for v in level_set]
            for level_set in geometry.per_level_dex
        ],
        "maximal_faces": [
            {
                "dim": f.dim,
                "tight": [i + 1 for i in f.q],
                "vertices": [format_vector(v.coords) for v in f.vertices],
            }
            for f in geometry.maximal_faces
        ],
    }


def create_session(
    problem: MlProblem,
    polytope: Polytope,
    geometry: CompromiseSet,
    big_m: Fraction = DEFAULT_BIG_M,
    strict_sp: bool = False,
) -> SessionState:
    """Fresh session at the sorting-set decision point."""
    return SessionState(
        problem=problem,
        polytope=polytope,
        geometry=geometry,
        big_m=big_m,
        strict_sp=strict_sp,
        phase=Phase.AWAIT_SORTING_SET,
        trace=({"event": "phase1", **_phase1_record(geometry)},),
    )


def choose_sorting_set(state: SessionState, choice: int | None) -> SessionState:
    """Pick a sorting set (1-based index, None = first) and derive bounds."""
    state.require_phase(Phase.AWAIT_SORTING_SET, "choosing a sorting set")
    candidates = sorting_sets(state.geometry)
    index = 1 if choice is None else choice
    if not (1 <= index <= len(candidates)):
        raise InvalidSortingIndex(
            f"sorting set index {index} out of range 1..{len(candidates)}"
        )
    face = candidates[index - 1]

    common = state.geometry.n_hat_dex
    if len(common) < 2:
        raise AssumptionViolated(
            f"need at least 2 common efficient extreme points, found {len(common)}"
        )
    spdex = tuple(v for v in common if v.coords in {w.coords for w in face.vertices})
    if not spdex:
        raise AssumptionViolated("chosen sorting set has no common efficient extreme point")
    if {v.coords for v in spdex} == {v.coords for v in common}:
        raise AssumptionViolated(
            "sorting set must not contain every common efficient extreme point"
        )
    lower, upper = initial_bounds(spdex)
    record = {
        "event": "sorting_set",
        "index": index,
        "vertices": [format_vector(v.coords) for v in spdex],
        "card_spdex": len(spdex),
        "lower": format_vector(lower),
        "upper": format_vector(upper),
    }
    return dataclasses.replace(
        state,
        phase=Phase.AWAIT_SOLVE,
        sorting_index=index,
        sorting_face=face,
        card_spdex=len(spdex),
        bounds_initial=(lower, upper),
        bounds_current=(lower, upper),
        current_level=1,
        trace=state.trace + (record,),
    )


def start_session(
    problem: MlProblem,
    polytope: Polytope,
    geometry: CompromiseSet,
    sorting_choice: int | None = None,
    big_m: Fraction = DEFAULT_BIG_M,
    strict_sp: bool = False,
) -> SessionState:
    """Create a session and immediately commit to a sorting set."""
    return choose_sorting_set(
        create_session(problem, polytope, geometry, big_m=big_m, strict_sp=strict_sp),
        sorting_choice,
    )


def _strict_equalities(state: SessionState) -> tuple[Mat, Vec] | None:
    if not state.strict_sp:
        return None
    face = state.sorting_face
    rows = tuple(state.polytope.a_tilde[i] for i in face.q)
    rhs = tuple(state.polytope.b_tilde[i] for i in face.q)
    return (rows, rhs) if rows else None


def _default_start_point(state: SessionState) -> Vec | None:
    """Previous level's compromise, when it fits the current box and region."""
    if not state.compromises:
        return None
    candidate = state.compromises[-1]
    lower, upper = state.bounds_current
    if any(not (lo <= v <= hi) for v, lo, hi in zip(candidate, lower, upper)):
        return None
    if not state.polytope.contains(candidate):
        return None
    if state.strict_sp:
        face = state.sorting_face
        for i in face.q:
            if dot(state.polytope.a_tilde[i], candidate) != state.polytope.b_tilde[i]:
                return None
    return candidate


def solve_current_level(
    state: SessionState,
    x0: Sequence[Fraction] | None = None,
) -> SessionState:
    """Solve level p over the polytope intersected with the current box."""
    state.require_phase(Phase.AWAIT_SOLVE, "solving a level")
    p = state.current_level
    problem = state.problem
    level = problem.levels[p - 1]
    lower, upper = state.bounds_current
    start = vec(x0) if x0 is not None else _default_start_point(state)
    try:
        result = solve_molp(
            level,
            problem.A,
            problem.b,
            lower,
            upper,
            x0=start,
            big_m=state.big_m,
            equalities=_strict_equalities(state),
        )
    except CascadeOptError as exc:
        if exc.step is None:
            exc.step = f"level-{p}-solve"
        raise
    record = {
        "event": "level_solved",
        "level": p,
        "lower": format_vector(lower),
        "upper": format_vector(upper),
        "initial_point": format_vector(start) if start is not None else None,
        "weights": format_vector(result.weights.values),
        "compromise": format_vector(result.x),
        "objective_values": format_vector(level.values_at(result.x)),
        "pivots": result.outcome.iterations,
        "beta_history": [format_rational(rec.beta) for rec in result.outcome.trace],
    }
    done = p >= problem.num_levels
    return dataclasses.replace(
        state,
        phase=Phase.DONE if done else Phase.AWAIT_SLACKS,
        compromises=state.compromises + (result.x,),
        results=state.results + (result,),
        trace=state.trace + (record,),
    )


def apply_dm_slacks(state: SessionState, slacks: DmSlacks) -> SessionState:
    """Narrow the acting level's owned bounds around its compromise."""
    state.require_phase(Phase.AWAIT_SLACKS, "applying slacks")
    p = state.current_level
    if slacks.level != p:
        raise PhaseError(
            f"slacks are for level {slacks.level}, session is narrowing level {p}",
            phase=state.phase.value,
        )
    problem = state.problem
    owned = problem.ownership_range(p)
    if len(slacks.lower) != len(owned):
        raise DimensionMismatch(
            f"level {p} owns {len(owned)} variables, got {len(slacks.lower)} slack pairs"
        )
    compromise = state.compromises[-1]
    init_lower, init_upper = state.bounds_initial
    lower = list(state.bounds_current[0])
    upper = list(state.bounds_current[1])
    for offset, j in enumerate(owned):
        new_lo = compromise[j] - slacks.lower[offset]
        new_hi = compromise[j] + slacks.upper[offset]
        if new_lo < init_lower[j]:
            raise DmBoundsViolation(
                f"x[{j + 1}]: compromise {format_rational(compromise[j])} minus slack "
                f"{format_rational(slacks.lower[offset])} drops below the initial lower "
                f"bound {format_rational(init_lower[j])}",
                component=j + 1,
                side="lower",
                excess=init_lower[j] - new_lo,
            )
        if new_hi > init_upper[j]:
            raise DmBoundsViolation(
                f"x[{j + 1}]: compromise {format_rational(compromise[j])} plus slack "
                f"{format_rational(slacks.upper[offset])} exceeds the initial upper "
                f"bound {format_rational(init_upper[j])}",
                component=j + 1,
                side="upper",
                excess=new_hi - init_upper[j],
            )
        lower[j] = new_lo
        upper[j] = new_hi
    record = {
        "event": "slacks_applied",
        "level": p,
        "l": format_vector(slacks.lower),
        "r": format_vector(slacks.upper),
        "lower": format_vector(lower),
        "upper": format_vector(upper),
    }
    return dataclasses.replace(
        state,
        phase=Phase.AWAIT_SOLVE,
        bounds_current=(tuple(lower), tuple(upper)),
        current_level=p + 1,
        trace=state.trace + (record,),
    )


def finalize(state: SessionState) -> FinalCompromise:
    state.require_phase(Phase.DONE, "finalizing")
    final = state.compromises[-1]
    objectives = tuple(level.values_at(final) for level in state.problem.levels)
    record = {
        "event": "final",
        "x": format_vector(final),
        "objective_values": [format_vector(v) for v in objectives],
    }
    return FinalCompromise(x=final, objective_values=objectives, trace=state.trace + (record,))


@dataclass(frozen=True)
class BatchConfig:
    big_m: Fraction = DEFAULT_BIG_M
    sorting_choice: int | None = None
    initial_points: tuple[Vec | None, ...] | None = None
    slacks: tuple[DmSlacks, ...] | None = None
    strict_sp: bool = False


def run_batch(problem: MlProblem, config: BatchConfig = BatchConfig()) -> FinalCompromise:
    """One unattended pass: geometry, sorting set, all level solves and slacks."""
    P = problem.num_levels
    slack_list = config.slacks or ()
    if len(slack_list) < P - 1:
        raise DimensionMismatch(
            f"batch run of {P} levels needs {P - 1} slack sets, got {len(slack_list)}"
        )
    init_list = config.initial_points or (None,) * P
    if len(init_list) != P:
        raise DimensionMismatch(f"need one initial point (or null) per level, got {len(init_list)}")

    try:
        polytope, geometry = analyze(problem.A, problem.b, problem.levels, config.big_m)
    except CascadeOptError as exc:
        if exc.step is None:
            exc.step = "phase1-geometry"
        raise
    state = start_session(
        problem,
        polytope,
        geometry,
        sorting_choice=config.sorting_choice,
        big_m=config.big_m,
        strict_sp=config.strict_sp,
    )
    for p in range(1, P + 1):
        state = solve_current_level(state, x0=init_list[p - 1])
        if p < P:
            try:
                state = apply_dm_slacks(state, slack_list[p - 1])
            except CascadeOptError as exc:
                if exc.step is None:
                    exc.step = f"level-{p}-slacks"
                raise
    return finalize(state)
