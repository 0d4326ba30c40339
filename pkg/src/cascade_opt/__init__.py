"""Exact compromise search for multilevel multiobjective linear programs."""

from .adaptive_lp import (
    BoundedLp,
    LpOutcome,
    LpStatus,
    SupportPlan,
    find_initial_feasible,
    solve_bounded_lp,
    suboptimality_estimate,
    support_from_point,
)
from .driver import (
    BatchConfig,
    DmSlacks,
    FinalCompromise,
    MlProblem,
    Phase,
    SessionState,
    apply_dm_slacks,
    choose_sorting_set,
    create_session,
    finalize,
    initial_bounds,
    run_batch,
    solve_current_level,
    start_session,
)
from .errors import CascadeOptError
from .geometry import (
    CompromiseSet,
    Face,
    Polytope,
    Vertex,
    analyze,
    common_efficient_extremes,
    compromise_faces,
    efficiency_test,
    efficient_extreme_points,
    enumerate_vertices,
    sorting_sets,
)
from .linalg import affine_dimension, mat, solve_linear_system, vec
from .problem_io import ProblemDocument, parse_problem, parse_problem_dict, serialize_problem
from .rationals import Rational, format_rational, format_vector, parse_rational, parse_vector
from .report import build_report, render_text, write_report
from .scalarize import (
    AuxSolution,
    LevelObjectives,
    MolpResult,
    SlackifiedLevel,
    WeightVector,
    auxiliary_weights,
    slackify,
    solve_molp,
)

__version__ = "0.1.0"

__all__ = [
    "AuxSolution",
    "BatchConfig",
    "BoundedLp",
    "CascadeOptError",
    "CompromiseSet",
    "DmSlacks",
    "Face",
    "FinalCompromise",
    "LevelObjectives",
    "LpOutcome",
    "LpStatus",
    "MlProblem",
    "MolpResult",
    "Phase",
    "Polytope",
    "ProblemDocument",
    "Rational",
    "SessionState",
    "SlackifiedLevel",
    "SupportPlan",
    "Vertex",
    "WeightVector",
    "affine_dimension",
    "analyze",
    "apply_dm_slacks",
    "auxiliary_weights",
    "build_report",
    "choose_sorting_set",
    "common_efficient_extremes",
    "compromise_faces",
    "create_session",
    "efficiency_test",
    "efficient_extreme_points",
    "enumerate_vertices",
    "finalize",
    "find_initial_feasible",
    "format_rational",
    "format_vector",
    "initial_bounds",
    "mat",
    "parse_problem",
    "parse_problem_dict",
    "parse_rational",
    "parse_vector",
    "render_text",
    "run_batch",
    "serialize_problem",
    "slackify",
    "solve_bounded_lp",
    "solve_current_level",
    "solve_linear_system",
    "solve_molp",
    "sorting_sets",
    "start_session",
    "suboptimality_estimate",
    "support_from_point",
    "vec",
    "write_report",
]
