#!/usr/bin/env python3
"""Regenerate golden data for the two-level worked example by brute force.

Everything here is computed from first principles with stdlib Fractions and
pairwise row intersections, independently of the package under test:

  * vertices of {Ax <= b, x >= 0} from all 2x2 row systems,
  * per-level efficient vertices by enumerating the dominance region
    {y feasible : c_p y >= c_p v} and looking for a strictly better corner,
  * common efficient vertices and the inclusion-maximal efficient faces.

Run from the repository root:  python3 tests/golden/make_golden.py
Output is written next to this script as two_level_expected.json.
"""
from __future__ import annotations

import json
from fractions import Fraction
from itertools import combinations
from pathlib import Path

A = [
    [-2, 1],
    [-1, 2],
    [0, 1],
    [1, 0],
    [-1, -2],
    [3, -4],
    [1, -2],
]
B_RHS = [3, 9, 6, 6, -9, 7, 2]

C1 = [
    [Fraction(2), Fraction(2)],
    [Fraction(-1, 2), Fraction(7, 25)],
    [Fraction(-1, 5), Fraction(1, 2)],
]
C2 = [
    [Fraction(1), Fraction(3)],
    [Fraction(-2), Fraction(-1)],
    [Fraction(0), Fraction(1)],
]


def h_rep(extra_rows=(), extra_rhs=()):
    """Rows of the inequality system Ax <= b plus x >= 0, plus extras."""
    rows = [[Fraction(v) for v in row] for row in A]
    rhs = [Fraction(v) for v in B_RHS]
    rows += [[Fraction(-1), Fraction(0)], [Fraction(0), Fraction(-1)]]
    rhs += [Fraction(0), Fraction(0)]
    rows += [list(r) for r in extra_rows]
    rhs += list(extra_rhs)
    return rows, rhs


def solve2(r1, r2, h1, h2):
    det = r1[0] * r2[1] - r1[1] * r2[0]
    if det == 0:
        return None
    x1 = (h1 * r2[1] - r1[1] * h2) / det
    x2 = (r1[0] * h2 - h1 * r2[0]) / det
    return (x1, x2)


def vertices_of(rows, rhs):
    found = {}
    for i, j in combinations(range(len(rows)), 2):
        pt = solve2(rows[i], rows[j], rhs[i], rhs[j])
        if pt is None:
            continue
        if all(r[0] * pt[0] + r[1] * pt[1] <= h for r, h in zip(rows, rhs)):
            found[pt] = True
    return sorted(found, reverse=True)


def tight_rows(rows, rhs, pt):
    return [i for i, (r, h) in enumerate(zip(rows, rhs)) if r[0] * pt[0] + r[1] * pt[1] == h]


def objective_values(c, pt):
    return [row[0] * pt[0] + row[1] * pt[1] for row in c]


def dominated(pt, c):
    """True iff some feasible y has c y >= c pt with c y != c pt."""
    base = objective_values(c, pt)
    dom_rows, dom_rhs = h_rep(
        extra_rows=[[-row[0], -row[1]] for row in c],
        extra_rhs=[-v for v in base],
    )
    for w in vertices_of(dom_rows, dom_rhs):
        if objective_values(c, w) != base:
            return True
    return False


def fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def main() -> None:
    rows, rhs = h_rep()
    verts = vertices_of(rows, rhs)
    tights = {v: tight_rows(rows, rhs, v) for v in verts}

    n1 = [v for v in verts if not dominated(v, C1)]
    n2 = [v for v in verts if not dominated(v, C2)]
    common = [v for v in verts if v in n1 and v in n2]

    # Candidate efficient faces: tight-set intersections over subsets of the
    # common efficient vertices; a face survives iff its barycenter is
    # undominated for both levels.  Then keep only inclusion-maximal faces.
    candidates = {}
    for size in range(1, len(common) + 1):
        for sub in combinations(common, size):
            q = set(tights[sub[0]])
            for v in sub[1:]:
                q &= set(tights[v])
            members = tuple(sorted((v for v in verts if q <= set(tights[v])), reverse=True))
            canon_q = set(tights[members[0]])
            for v in members[1:]:
                canon_q &= set(tights[v])
            candidates[members] = sorted(canon_q)

    kept = {}
    for members, q in candidates.items():
        k = len(members)
        bary = (
            sum((v[0] for v in members), Fraction(0)) / k,
            sum((v[1] for v in members), Fraction(0)) / k,
        )
        if not dominated(bary, C1) and not dominated(bary, C2):
            kept[members] = q
    maximal = {
        members: q
        for members, q in kept.items()
        if not any(set(q2) < set(q) for m2, q2 in kept.items() if m2 != members)
    }

    out = {
        "vertices": [
            {"coords": [fmt(v[0]), fmt(v[1])], "tight": [i + 1 for i in tights[v]]}
            for v in verts
        ],
        "level_1_efficient": [[fmt(v[0]), fmt(v[1])] for v in n1],
        "level_2_efficient": [[fmt(v[0]), fmt(v[1])] for v in n2],
        "common_efficient": [[fmt(v[0]), fmt(v[1])] for v in common],
        "maximal_faces": [
            {
                "vertices": [[fmt(x) for x in v] for v in members],
                "tight": [i + 1 for i in q],
            }
            for members, q in sorted(
                maximal.items(), key=lambda kv: (-len(kv[0]), kv[0]), reverse=False
            )
        ],
    }
    # order faces by descending dimension proxy (vertex count), then
    # descending vertex sequence, mirroring the report ordering
    out["maximal_faces"].sort(
        key=lambda f: (
            -len(f["vertices"]),
            [[-Fraction(s) for s in v] for v in f["vertices"]],
        )
    )
    dest = Path(__file__).with_name("two_level_expected.json")
    dest.write_text(json.dumps(out, indent=2) + "\n")
    print(f"wrote {dest}")
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
