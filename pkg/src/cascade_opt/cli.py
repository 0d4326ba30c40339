"""Command-line interface.

Subcommands: ``vertices``, ``efficient``, ``compromises`` expose the
first-phase artifacts of a problem file; ``solve`` runs the full batch and
optionally writes the report bundle (JSON + CSV tables + figure); ``serve``
starts the interactive session API.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .driver import BatchConfig, DmSlacks, run_batch
from .errors import CascadeOptError
from .geometry import Polytope, analyze, efficient_extreme_points, enumerate_vertices
from .problem_io import parse_problem
from .rationals import format_vector, parse_vector
from .report import Stopwatch, build_report, render_text, write_report

DEFAULT_PORT = 8080


def _tuple_str(values) -> str:
    return "(" + ", ".join(values) + ")"


def _load(path: str):
    return parse_problem(path)


def _override_big_m(config: BatchConfig, args) -> BatchConfig:
    import dataclasses

    from .rationals import parse_rational

    updates = {}
    if getattr(args, "big_m", None):
        updates["big_m"] = parse_rational(args.big_m, where="--bigM")
    if getattr(args, "sorting_set", None):
        updates["sorting_choice"] = args.sorting_set
    if getattr(args, "strict_sp", False):
        updates["strict_sp"] = True
    if getattr(args, "init", None):
        raw = json.loads(Path(args.init).read_text())
        updates["initial_points"] = tuple(
            None if entry is None else parse_vector(entry, where=f"init[{i + 1}]")
            for i, entry in enumerate(raw)
        )
    if getattr(args, "slacks", None):
        raw = json.loads(Path(args.slacks).read_text())
        updates["slacks"] = tuple(
            DmSlacks(
                i + 1,
                parse_vector(entry["l"], where=f"slacks[{i + 1}].l"),
                parse_vector(entry["r"], where=f"slacks[{i + 1}].r"),
            )
            for i, entry in enumerate(raw)
        )
    return dataclasses.replace(config, **updates) if updates else config


def _cmd_vertices(args) -> int:
    doc = _load(args.problem)
    poly = Polytope(doc.problem.A, doc.problem.b)
    verts = enumerate_vertices(poly)
    if args.json:
        print(
            json.dumps(
                [
                    {"coords": format_vector(v.coords), "tight": [i + 1 for i in v.tight]}
                    for v in verts
                ],
                indent=2,
            )
        )
    else:
        print(f"vertices of the feasible region ({len(verts)}):")
        for i, v in enumerate(verts, start=1):
            coords = format_vector(v.coords)
            tight = ", ".join(str(i + 1) for i in v.tight)
            print(f"  V{i} = {_tuple_str(coords)}  tight rows {{{tight}}}")
    return 0


def _cmd_efficient(args) -> int:
    doc = _load(args.problem)
    if not (1 <= args.level <= doc.problem.num_levels):
        raise CascadeOptError(
            f"--level must be in 1..{doc.problem.num_levels}", step="efficient"
        )
    poly = Polytope(doc.problem.A, doc.problem.b)
    level = doc.problem.levels[args.level - 1]
    efficient = efficient_extreme_points(level, poly, doc.config.big_m)
    if args.json:
        print(json.dumps([format_vector(v.coords) for v in efficient], indent=2))
    else:
        print(f"efficient extreme points of level {args.level} ({len(efficient)}):")
        for v in efficient:
            print(f"  {_tuple_str(format_vector(v.coords))}")
    return 0


def _cmd_compromises(args) -> int:
    doc = _load(args.problem)
    _, geometry = analyze(doc.problem.A, doc.problem.b, doc.problem.levels, doc.config.big_m)
    if args.json:
        print(
            json.dumps(
                {
                    "common_efficient": [format_vector(v.coords) for v in geometry.n_hat_dex],
                    "maximal_faces": [
                        {
                            "index": i + 1,
                            "dim": f.dim,
                            "tight": [r + 1 for r in f.q],
                            "vertices": [format_vector(v.coords) for v in f.vertices],
                        }
                        for i, f in enumerate(geometry.maximal_faces)
                    ],
                },
                indent=2,
            )
        )
        return 0
    print("common efficient extreme points:")
    for v in geometry.n_hat_dex:
        print(f"  {_tuple_str(format_vector(v.coords))}")
    print("maximal compromise faces (sorting-set candidates):")
    for i, f in enumerate(geometry.maximal_faces, start=1):
        verts = " -- ".join(_tuple_str(format_vector(v.coords)) for v in f.vertices)
        print(f"  [{i}] dim {f.dim}  {verts}")
    return 0


def _cmd_solve(args) -> int:
    watch = Stopwatch()
    doc = _load(args.problem)
    config = _override_big_m(doc.config, args)
    watch.lap("parse")

    problem = doc.problem
    polytope, geometry = analyze(problem.A, problem.b, problem.levels, config.big_m)
    watch.lap("phase1")

    from .driver import finalize, solve_current_level, start_session
    from .driver import apply_dm_slacks as _apply

    state = start_session(
        problem,
        polytope,
        geometry,
        sorting_choice=config.sorting_choice,
        big_m=config.big_m,
        strict_sp=config.strict_sp,
    )
    inits = config.initial_points or (None,) * problem.num_levels
    slacks = config.slacks or ()
    if len(slacks) < problem.num_levels - 1:
        raise CascadeOptError(
            f"solve needs {problem.num_levels - 1} slack sets (config.slacks or --slacks), "
            f"got {len(slacks)}",
            step="phase2",
        )
    for p in range(1, problem.num_levels + 1):
        state = solve_current_level(state, x0=inits[p - 1] if p <= len(inits) else None)
        if p < problem.num_levels:
            state = _apply(state, slacks[p - 1])
    final = finalize(state)
    watch.lap("phase2")

    report = build_report(problem, polytope, geometry, final, state, timings=watch.marks)
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True))
    else:
        print(render_text(report), end="")
    if args.report:
        written = write_report(report, args.report)
        print(f"report written: {', '.join(str(p) for p in written)}", file=sys.stderr)
    return 0


def _cmd_serve(args) -> int:
    import uvicorn

    from .server import create_app

    port = args.port or int(os.environ.get("CASCADE_OPT_PORT", DEFAULT_PORT))
    app = create_app(session_ttl=args.session_ttl, console_dir=args.console)
    uvicorn.run(app, host=args.host, port=port, log_level="info")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cascade-opt",
        description="Exact compromise search for multilevel multiobjective linear programs.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_vertices = sub.add_parser("vertices", help="enumerate the feasible region's extreme points")
    p_vertices.add_argument("problem", help="problem JSON file")
    p_vertices.add_argument("--json", action="store_true", help="machine-readable output")
    p_vertices.set_defaults(func=_cmd_vertices)

    p_eff = sub.add_parser("efficient", help="efficient extreme points of one level")
    p_eff.add_argument("problem")
    p_eff.add_argument("--level", type=int, required=True, help="level index (1-based)")
    p_eff.add_argument("--json", action="store_true")
    p_eff.set_defaults(func=_cmd_efficient)

    p_comp = sub.add_parser("compromises", help="common efficient points and sorting-set candidates")
    p_comp.add_argument("problem")
    p_comp.add_argument("--json", action="store_true")
    p_comp.set_defaults(func=_cmd_compromises)

    p_solve = sub.add_parser("solve", help="run the full batch to a final compromise")
    p_solve.add_argument("problem")
    p_solve.add_argument("--sorting-set", type=int, help="1-based sorting set index")
    p_solve.add_argument("--slacks", help="JSON file with per-level slack pairs")
    p_solve.add_argument("--init", help="JSON file with per-level initial points")
    p_solve.add_argument("--strict-sp", action="store_true", help="restrict each level to the sorting set")
    p_solve.add_argument("--bigM", dest="big_m", help="slack/box bound (exact rational)")
    p_solve.add_argument("--report", help="write report JSON (+ CSV tables and figure) here")
    p_solve.add_argument("--json", action="store_true", help="print the report JSON to stdout")
    p_solve.set_defaults(func=_cmd_solve)

    p_serve = sub.add_parser("serve", help="start the interactive session API")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, help=f"default $CASCADE_OPT_PORT or {DEFAULT_PORT}")
    p_serve.add_argument("--session-ttl", type=float, default=3600.0, help="idle expiry in seconds")
    p_serve.add_argument("--console", help="directory with the built browser console to serve at /")
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CascadeOptError as exc:
        step = f" at {exc.step}" if exc.step else ""
        print(f"error{step}: {exc.args[0] if exc.args else exc}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
