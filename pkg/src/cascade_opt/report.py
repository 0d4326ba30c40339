"""Run reports: one JSON document plus table, CSV, and figure renderings.

The JSON document is the canonical machine-readable artifact; the text
tables, the two CSV files, and the optional figure are derived views of the
same data, so re-rendering a parsed report is a fixed point.
"""
from __future__ import annotations

import csv
import io
import json
import time
from pathlib import Path
from typing import Sequence

from .driver import FinalCompromise, MlProblem, SessionState
from .geometry import CompromiseSet, Polytope
from .rationals import format_vector


def build_report(
    problem: MlProblem,
    polytope: Polytope,
    geometry: CompromiseSet,
    final: FinalCompromise,
    state: SessionState,
    timings: dict[str, float] | None = None,
) -> dict:
    """Assemble the canonical report document (all numbers as rational strings)."""
    efficiency_by_level = [
        {v.coords for v in level_set} for level_set in geometry.per_level_dex
    ]
    common = {v.coords for v in geometry.n_hat_dex}
    vertices = [
        {
            "coords": format_vector(v.coords),
            "tight": [i + 1 for i in v.tight],
            "efficient_for": [
                p + 1 for p, eff in enumerate(efficiency_by_level) if v.coords in eff
            ],
            "common": v.coords in common,
        }
        for v in polytope.vertices()
    ]
    levels = [rec for rec in final.trace if rec.get("event") == "level_solved"]
    slacks = [rec for rec in final.trace if rec.get("event") == "slacks_applied"]
    sorting = next(rec for rec in final.trace if rec.get("event") == "sorting_set")
    report = {
        "problem": {
            "levels": problem.num_levels,
            "variables": problem.num_vars,
            "constraints": problem.num_constraints,
            "owned": list(problem.owned),
        },
        "vertices": vertices,
        "per_level_efficient": [
            [format_vector(v.coords) for v in level_set]
            for level_set in geometry.per_level_dex
        ],
        "common_efficient": [format_vector(v.coords) for v in geometry.n_hat_dex],
        "maximal_faces": [
            {
                "index": i + 1,
                "dim": f.dim,
                "tight": [r + 1 for r in f.q],
                "vertices": [format_vector(v.coords) for v in f.vertices],
                "barycenter": format_vector(f.barycenter),
            }
            for i, f in enumerate(geometry.maximal_faces)
        ],
        "sorting_set": {k: v for k, v in sorting.items() if k != "event"},
        "iterations": [
            {
                "level": rec["level"],
                "lower": rec["lower"],
                "upper": rec["upper"],
                "initial_point": rec["initial_point"],
                "weights": rec["weights"],
                "compromise": rec["compromise"],
                "objective_values": rec["objective_values"],
                "pivots": rec["pivots"],
            }
            for rec in levels
        ],
        "slacks": [{k: v for k, v in rec.items() if k != "event"} for rec in slacks],
        "final_compromise": {
            "x": format_vector(final.x),
            "objective_values": [format_vector(v) for v in final.objective_values],
        },
        "trace": list(final.trace),
    }
    if timings is not None:
        report["timings"] = {k: round(v, 6) for k, v in timings.items()}
    return report


def report_to_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=True) + "\n"


def _tuple_str(values: Sequence[str]) -> str:
    return "(" + ", ".join(values) + ")"


def render_text(report: dict) -> str:
    """Human-readable tables for standard output."""
    out = io.StringIO()
    w = out.write
    prob = report["problem"]
    w(
        f"problem: {prob['levels']} levels, {prob['variables']} variables, "
        f"{prob['constraints']} constraints\n\n"
    )
    w(f"vertices of the feasible region ({len(report['vertices'])}):\n")
    for i, v in enumerate(report["vertices"], start=1):
        eff = ",".join(str(p) for p in v["efficient_for"]) or "-"
        star = " *" if v["common"] else ""
        w(
            f"  V{i} = {_tuple_str(v['coords'])}  tight rows {{{', '.join(map(str, v['tight']))}}}"
            f"  efficient for levels [{eff}]{star}\n"
        )
    w("  (* = efficient for every level)\n\n")
    w("common efficient extreme points:\n")
    for coords in report["common_efficient"]:
        w(f"  {_tuple_str(coords)}\n")
    w("\nmaximal compromise faces (sorting-set candidates):\n")
    for f in report["maximal_faces"]:
        verts = " -- ".join(_tuple_str(v) for v in f["vertices"])
        w(f"  [{f['index']}] dim {f['dim']}  {verts}  (rows {{{', '.join(map(str, f['tight']))}}})\n")
    s = report["sorting_set"]
    w(f"\nchosen sorting set: [{s['index']}] with extreme points ")
    w(", ".join(_tuple_str(v) for v in s["vertices"]))
    w(f"\ninitial bounds: lower {_tuple_str(s['lower'])}, upper {_tuple_str(s['upper'])}\n")
    for it in report["iterations"]:
        w(f"\nlevel {it['level']}:\n")
        w(f"  bounds     lower {_tuple_str(it['lower'])}, upper {_tuple_str(it['upper'])}\n")
        if it["initial_point"]:
            w(f"  start      {_tuple_str(it['initial_point'])}\n")
        w(f"  weights    {_tuple_str(it['weights'])}\n")
        w(f"  compromise {_tuple_str(it['compromise'])}  ({it['pivots']} pivots)\n")
        w(f"  objectives {_tuple_str(it['objective_values'])}\n")
    for sl in report["slacks"]:
        w(
            f"\nlevel {sl['level']} slacks: l={_tuple_str(sl['l'])} r={_tuple_str(sl['r'])}"
            f" -> bounds lower {_tuple_str(sl['lower'])}, upper {_tuple_str(sl['upper'])}\n"
        )
    fin = report["final_compromise"]
    w(f"\nfinal compromise: {_tuple_str(fin['x'])}\n")
    for p, vals in enumerate(fin["objective_values"], start=1):
        w(f"  level {p} objective values: {_tuple_str(vals)}\n")
    return out.getvalue()


def _write_vertices_csv(report: dict, path: Path) -> None:
    n = report["problem"]["variables"]
    levels = report["problem"]["levels"]
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["vertex"]
            + [f"x{j + 1}" for j in range(n)]
            + ["tight_rows"]
            + [f"efficient_level_{p + 1}" for p in range(levels)]
            + ["common"]
        )
        for i, v in enumerate(report["vertices"], start=1):
            writer.writerow(
                [i]
                + list(v["coords"])
                + [";".join(map(str, v["tight"]))]
                + [
                    "yes" if (p + 1) in v["efficient_for"] else "no"
                    for p in range(levels)
                ]
                + ["yes" if v["common"] else "no"]
            )


def _write_levels_csv(report: dict, path: Path) -> None:
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(
            ["level", "lower", "upper", "initial_point", "weights", "compromise", "objective_values", "pivots"]
        )
        for it in report["iterations"]:
            writer.writerow(
                [
                    it["level"],
                    ";".join(it["lower"]),
                    ";".join(it["upper"]),
                    ";".join(it["initial_point"] or []),
                    ";".join(it["weights"]),
                    ";".join(it["compromise"]),
                    ";".join(it["objective_values"]),
                    it["pivots"],
                ]
            )


def write_report(report: dict, json_path: str | Path) -> list[Path]:
    """Write the JSON document plus CSV tables and, for 2-var problems, a figure.

    Returns the list of files written; companions share the JSON file's stem.
    """
    json_path = Path(json_path)
    json_path.parent.mkdir(parents=True, exist_ok=True)
    written = [json_path]
    json_path.write_text(report_to_json(report))

    vertices_csv = json_path.with_name(json_path.stem + "_vertices.csv")
    _write_vertices_csv(report, vertices_csv)
    written.append(vertices_csv)
    levels_csv = json_path.with_name(json_path.stem + "_levels.csv")
    _write_levels_csv(report, levels_csv)
    written.append(levels_csv)

    if report["problem"]["variables"] == 2:
        from .figures import render_figure

        figure_path = json_path.with_suffix(".png")
        render_figure(report, figure_path)
        written.append(figure_path)
    return written


class Stopwatch:
    """Collects named wall-clock durations for the report's timings block."""

    def __init__(self):
        self.marks: dict[str, float] = {}
        self._last = time.perf_counter()

    def lap(self, name: str) -> None:
        now = time.perf_counter()
        self.marks[name] = now - self._last
        self._last = now
