"""Matplotlib rendering of two-variable runs.

Draws the feasible polygon, the compromise segments, the initial and
narrowed bound boxes, and each level's compromise point.  Display only:
coordinates go through float conversion here and nowhere else.
"""
from __future__ import annotations

import math
from fractions import Fraction
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
from matplotlib.patches import Rectangle


def _as_float_pair(coords: list[str]) -> tuple[float, float]:
    return (float(Fraction(coords[0])), float(Fraction(coords[1])))


def _polygon_order(points: list[tuple[float, float]]) -> list[tuple[float, float]]:
    cx = sum(p[0] for p in points) / len(points)
    cy = sum(p[1] for p in points) / len(points)
    return sorted(points, key=lambda p: math.atan2(p[1] - cy, p[0] - cx))


def render_figure(report: dict, path: str | Path) -> Path:
    path = Path(path)
    fig, ax = plt.subplots(figsize=(7.0, 5.6))

    hull = _polygon_order([_as_float_pair(v["coords"]) for v in report["vertices"]])
    xs = [p[0] for p in hull] + [hull[0][0]]
    ys = [p[1] for p in hull] + [hull[0][1]]
    ax.fill(xs, ys, color="#dbe9f6", zorder=1, label="feasible region")
    ax.plot(xs, ys, color="#5b84a8", linewidth=1.0, zorder=2)

    chosen = report["sorting_set"]["index"]
    for face in report["maximal_faces"]:
        pts = [_as_float_pair(v) for v in face["vertices"]]
        if len(pts) < 2:
            continue
        is_chosen = face["index"] == chosen
        ax.plot(
            [p[0] for p in pts],
            [p[1] for p in pts],
            color="#c23d2d" if is_chosen else "#e08a30",
            linewidth=3.0 if is_chosen else 2.0,
            zorder=4,
            label="chosen sorting set" if is_chosen else ("compromise face" if face["index"] == 1 else None),
        )

    boxes = [(it["lower"], it["upper"]) for it in report["iterations"]]
    for i, (lo, hi) in enumerate(boxes):
        (x0, y0), (x1, y1) = _as_float_pair(lo), _as_float_pair(hi)
        ax.add_patch(
            Rectangle(
                (x0, y0),
                x1 - x0,
                y1 - y0,
                fill=False,
                edgecolor="#3b7d3b",
                linestyle=["--", ":", "-."][i % 3],
                linewidth=1.4,
                zorder=3,
                label=f"level {i + 1} bounds",
            )
        )

    for it in report["iterations"]:
        px, py = _as_float_pair(it["compromise"])
        ax.plot([px], [py], marker="o", color="#1f4e79", markersize=6, zorder=5)
        ax.annotate(
            f"level {it['level']}: ({it['compromise'][0]}, {it['compromise'][1]})",
            (px, py),
            textcoords="offset points",
            xytext=(8, 6),
            fontsize=8,
        )
    fx, fy = _as_float_pair(report["final_compromise"]["x"])
    ax.plot([fx], [fy], marker="*", color="#c23d2d", markersize=14, zorder=6, label="final compromise")

    ax.set_xlabel("x1")
    ax.set_ylabel("x2")
    ax.set_title("compromise search over the feasible region")
    ax.legend(loc="best", fontsize=8)
    ax.grid(True, alpha=0.25)
    fig.tight_layout()
    fig.savefig(path, dpi=130)
    plt.close(fig)
    return path
