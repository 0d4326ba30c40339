"""Problem-file parsing and serialization.

Problem documents are JSON with every number written exactly, either as an
integer or as a ``"p/q"`` string:

    {
      "levels": [
        {"num_vars": 1, "objectives": [["2", "2"], ["-1/2", "7/25"]]},
        ...
      ],
      "constraints": {"A": [["-2", "1"], ...], "b": ["3", ...]},
      "config": {
        "bigM": "1000000",
        "sorting_choice": 2,
        "initial_points": [["2", "11/2"], null],
        "slacks": [{"l": ["1/2"], "r": ["1/2"]}],
        "strict_sp": false
      }
    }

``config`` and all of its keys are optional; parsing round-trips exactly.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any

from .driver import BatchConfig, DmSlacks, MlProblem
from .errors import DimensionMismatch, ParseError
from .linalg import Vec
from .rationals import format_rational, format_vector, parse_rational, parse_vector
from .scalarize import DEFAULT_BIG_M, LevelObjectives


@dataclass(frozen=True)
class ProblemDocument:
    problem: MlProblem
    config: BatchConfig


def _require(mapping: Any, key: str, where: str) -> Any:
    if not isinstance(mapping, dict):
        raise ParseError(f"{where}: expected an object")
    if key not in mapping:
        raise ParseError(f"{where}: missing required key {key!r}")
    return mapping[key]


def _parse_levels(raw: Any) -> tuple[tuple[LevelObjectives, ...], tuple[int, ...]]:
    if not isinstance(raw, list) or not raw:
        raise ParseError("levels: expected a non-empty array")
    levels = []
    owned = []
    for p, entry in enumerate(raw, start=1):
        where = f"levels[{p}]"
        num_vars = _require(entry, "num_vars", where)
        if not isinstance(num_vars, int) or num_vars < 1:
            raise ParseError(f"{where}.num_vars: expected a positive integer")
        rows_raw = _require(entry, "objectives", where)
        if not isinstance(rows_raw, list) or not rows_raw:
            raise ParseError(f"{where}.objectives: expected a non-empty array of rows")
        rows = tuple(
            parse_vector(row, where=f"{where}.objectives[{q + 1}]")
            for q, row in enumerate(rows_raw)
        )
        levels.append(LevelObjectives(p, rows))
        owned.append(num_vars)
    return tuple(levels), tuple(owned)


def _parse_constraints(raw: Any) -> tuple[tuple[Vec, ...], Vec]:
    rows_raw = _require(raw, "A", "constraints")
    b_raw = _require(raw, "b", "constraints")
    if not isinstance(rows_raw, list) or not rows_raw:
        raise ParseError("constraints.A: expected a non-empty array of rows")
    A = tuple(
        parse_vector(row, where=f"constraints.A[{i + 1}]") for i, row in enumerate(rows_raw)
    )
    b = parse_vector(b_raw, where="constraints.b")
    return A, b


def _parse_config(raw: Any, num_levels: int, num_owned: tuple[int, ...]) -> BatchConfig:
    if raw is None:
        return BatchConfig()
    if not isinstance(raw, dict):
        raise ParseError("config: expected an object")
    big_m = DEFAULT_BIG_M
    if "bigM" in raw:
        big_m = parse_rational(raw["bigM"], where="config.bigM")
        if big_m <= 0:
            raise ParseError("config.bigM: must be positive")
    sorting_choice = raw.get("sorting_choice")
    if sorting_choice is not None and (not isinstance(sorting_choice, int) or sorting_choice < 1):
        raise ParseError("config.sorting_choice: expected a 1-based integer index")
    initial_points = None
    if raw.get("initial_points") is not None:
        pts = raw["initial_points"]
        if not isinstance(pts, list):
            raise ParseError("config.initial_points: expected an array")
        if len(pts) != num_levels:
            raise DimensionMismatch(
                f"config.initial_points: expected {num_levels} entries, found {len(pts)}"
            )
        initial_points = tuple(
            None if entry is None else parse_vector(entry, where=f"config.initial_points[{i + 1}]")
            for i, entry in enumerate(pts)
        )
    slacks = None
    if raw.get("slacks") is not None:
        raw_slacks = raw["slacks"]
        if not isinstance(raw_slacks, list):
            raise ParseError("config.slacks: expected an array")
        parsed = []
        for i, entry in enumerate(raw_slacks, start=1):
            where = f"config.slacks[{i}]"
            lows = parse_vector(_require(entry, "l", where), where=f"{where}.l")
            highs = parse_vector(_require(entry, "r", where), where=f"{where}.r")
            if i <= len(num_owned) and (len(lows) != num_owned[i - 1] or len(highs) != num_owned[i - 1]):
                raise DimensionMismatch(
                    f"{where}: level {i} owns {num_owned[i - 1]} variables, "
                    f"found {len(lows)} lower and {len(highs)} upper slacks"
                )
            parsed.append(DmSlacks(i, lows, highs))
        slacks = tuple(parsed)
    strict = raw.get("strict_sp", False)
    if not isinstance(strict, bool):
        raise ParseError("config.strict_sp: expected true or false")
    return BatchConfig(
        big_m=big_m,
        sorting_choice=sorting_choice,
        initial_points=initial_points,
        slacks=slacks,
        strict_sp=strict,
    )


def parse_problem_dict(raw: Any, source: str = "<memory>") -> ProblemDocument:
    if not isinstance(raw, dict):
        raise ParseError(f"{source}: top level must be an object")
    levels, owned = _parse_levels(_require(raw, "levels", source))
    A, b = _parse_constraints(_require(raw, "constraints", source))
    n = len(A[0])
    total = sum(owned)
    if total != n:
        raise DimensionMismatch(
            f"{source}: levels own {total} variables but constraints.A has {n} columns"
        )
    if len(b) != len(A):
        raise DimensionMismatch(
            f"{source}: constraints.b has {len(b)} entries, constraints.A has {len(A)} rows"
        )
    for level in levels:
        for q, row in enumerate(level.rows, start=1):
            if len(row) != n:
                raise DimensionMismatch(
                    f"{source}: levels[{level.index}].objectives[{q}] has {len(row)} "
                    f"coefficients, expected {n}"
                )
    for pt_index, pt in enumerate(
        (raw.get("config") or {}).get("initial_points") or [], start=1
    ):
        if pt is not None and len(pt) != n:
            raise DimensionMismatch(
                f"{source}: config.initial_points[{pt_index}] has {len(pt)} coordinates, expected {n}"
            )
    problem = MlProblem(levels=levels, owned=owned, A=A, b=b)
    config = _parse_config(raw.get("config"), len(levels), owned)
    return ProblemDocument(problem=problem, config=config)


def parse_problem(path: str | Path) -> ProblemDocument:
    """Parse a problem file; raises ParseError / DimensionMismatch on bad input."""
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}: invalid JSON ({exc.msg})") from exc
    return parse_problem_dict(raw, source=str(path))


def serialize_problem(doc: ProblemDocument) -> dict:
    """Inverse of parse_problem_dict: parse(serialize(doc)) == doc."""
    problem, config = doc.problem, doc.config
    out: dict[str, Any] = {
        "levels": [
            {
                "num_vars": problem.owned[p],
                "objectives": [format_vector(row) for row in level.rows],
            }
            for p, level in enumerate(problem.levels)
        ],
        "constraints": {
            "A": [format_vector(row) for row in problem.A],
            "b": format_vector(problem.b),
        },
    }
    cfg: dict[str, Any] = {}
    if config.big_m != DEFAULT_BIG_M:
        cfg["bigM"] = format_rational(config.big_m)
    if config.sorting_choice is not None:
        cfg["sorting_choice"] = config.sorting_choice
    if config.initial_points is not None:
        cfg["initial_points"] = [
            None if pt is None else format_vector(pt) for pt in config.initial_points
        ]
    if config.slacks is not None:
        cfg["slacks"] = [
            {"l": format_vector(s.lower), "r": format_vector(s.upper)} for s in config.slacks
        ]
    if config.strict_sp:
        cfg["strict_sp"] = True
    if cfg:
        out["config"] = cfg
    return out
