"""Quandle colourings, shadow colourings and their weight chains.

A colouring is a row of quandle indices, one per arc.  Enumeration first
compiles a plan for the diagram: a few arcs are branched over every quandle
element, every other arc is derived from the crossing relations, and each
leftover relation becomes a filter.  The plan runs on whole numpy arrays of
partial colourings, so the cost is about |Q|^(branch arcs) table lookups per
step.

Crossing rule: at a positive crossing ``out = in |> over``; at a negative one
``in = out |> over``.  Region rule: ``colour(right) |> colour(arc) =
colour(left)``, with the unbounded face coloured (1, 0).
"""
from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .diagram import LinkDiagram
from .quandle import Quandle

__all__ = [
    "ColoringError",
    "Plan",
    "compile_plan",
    "enumerate_colorings",
    "count_colorings",
    "ShadowColoring",
    "shadow",
    "shadow_faces",
    "WeightChain",
    "weights",
    "weight_arrays",
    "rack_boundary3",
    "is_degenerate",
]


class ColoringError(RuntimeError):
    """A shadow could not be extended consistently (a convention bug)."""


# step kinds: ("branch", arc) | ("derive", target, src, over, use_inverse) |
# ("check", lhs, src, over, use_inverse)   meaning lhs == T[src, over]

@dataclass(frozen=True)
class Plan:
    branches: tuple[int, ...]
    steps: tuple[tuple, ...]


def _rules(D: LinkDiagram):
    """Each crossing as two equivalent functional forms.

    Returns (a, src, over, use_inverse) tuples meaning ``a = T[src, over]``.
    """
    out = []
    for c in D.crossings:
        if c.sign > 0:
            fwd = (c.under_out, c.under_in, c.over, False)
            bwd = (c.under_in, c.under_out, c.over, True)
        else:
            fwd = (c.under_in, c.under_out, c.over, False)
            bwd = (c.under_out, c.under_in, c.over, True)
        out.append((fwd, bwd))
    return out


def _closure(D: LinkDiagram, known: set[int]) -> set[int]:
    known = set(known)
    rules = _rules(D)
    changed = True
    while changed:
        changed = False
        for fwd, bwd in rules:
            for tgt, src, over, _ in (fwd, bwd):
                if tgt not in known and src in known and over in known:
                    known.add(tgt)
                    changed = True
    return known


def choose_branches(D: LinkDiagram) -> tuple[int, ...]:
    if D.bridges is not None and len(_closure(D, set(D.bridges))) == D.n_arcs:
        return tuple(D.bridges)
    arcs = list(D.arcs)
    for size in (1, 2, 3):
        for combo in itertools.combinations(arcs, size):
            if len(_closure(D, set(combo))) == D.n_arcs:
                return combo
    # greedy fallback: add the arc that determines the most
    chosen: list[int] = []
    known: set[int] = set()
    while len(known) < D.n_arcs:
        best = max((a for a in arcs if a not in known),
                   key=lambda a: (len(_closure(D, known | {a})), -a))
        chosen.append(best)
        known = _closure(D, known | {best})
    return tuple(chosen)


def compile_plan(D: LinkDiagram, branches: Sequence[int] | None = None) -> Plan:
    branches = tuple(choose_branches(D) if branches is None else branches)
    rules = _rules(D)
    used = [False] * len(rules)
    known: set[int] = set()
    steps: list[tuple] = []

    def settle():
        progress = True
        while progress:
            progress = False
            for k, (fwd, bwd) in enumerate(rules):
                if used[k]:
                    continue
                tgt_f, src_f, over, _ = fwd
                tgt_b, src_b, _, _ = bwd
                if over not in known:
                    continue
                if src_f in known and tgt_f in known:
                    steps.append(("check",) + fwd)
                    used[k] = progress = True
                elif src_f in known:
                    steps.append(("derive",) + fwd)
                    known.add(tgt_f)
                    used[k] = progress = True
                elif src_b in known:
                    steps.append(("derive",) + bwd)
                    known.add(tgt_b)
                    used[k] = progress = True

    for a in branches:
        if a in known:
            continue
        steps.append(("branch", a))
        known.add(a)
        settle()
    missing = set(D.arcs) - known
    for a in sorted(missing):
        # arcs not reachable from the branches are branched as well
        steps.append(("branch", a))
        known.add(a)
        settle()
        branches = branches + (a,)
    return Plan(branches, tuple(steps))


def _run_plan(plan: Plan, n_arcs: int, op: np.ndarray, inv: np.ndarray,
              first_values: np.ndarray | None = None) -> np.ndarray:
    N = op.shape[0]
    dtype = np.int16 if N < 2 ** 15 else np.int32
    cols = np.zeros((1, n_arcs), dtype=dtype)
    first = True
    for step in plan.steps:
        kind = step[0]
        if kind == "branch":
            vals = np.arange(N, dtype=dtype)
            if first and first_values is not None:
                vals = np.asarray(first_values, dtype=dtype)
            first = False
            rows = cols.shape[0]
            cols = np.repeat(cols, len(vals), axis=0)
            cols[:, step[1]] = np.tile(vals, rows)
        else:
            _, tgt, src, over, use_inv = step
            T = inv if use_inv else op
            val = T[cols[:, src], cols[:, over]]
            if kind == "derive":
                cols[:, tgt] = val
            else:
                cols = cols[cols[:, tgt] == val]
        if cols.shape[0] == 0:
            break
    return cols


def _worker(args):
    plan, n_arcs, op, inv, vals = args
    return _run_plan(plan, n_arcs, op, inv, vals)


def enumerate_colorings(D: LinkDiagram, Q: Quandle, *, workers: int = 1,
                        plan: Plan | None = None) -> np.ndarray:
    """All colourings, as an array of shape (count, n_arcs).

    Rows follow the lexicographic order of the branch-arc values, so the
    result does not depend on ``workers``.
    """
    plan = plan or compile_plan(D)
    op, inv = Q.op_table, Q.inv_table
    if workers <= 1 or not plan.branches:
        return _run_plan(plan, D.n_arcs, op, inv)
    chunks = np.array_split(np.arange(Q.size), workers)
    jobs = [(plan, D.n_arcs, op, inv, c) for c in chunks if len(c)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_worker, jobs))
    return np.concatenate(parts, axis=0)


def count_colorings(D: LinkDiagram, Q: Quandle, **kw) -> int:
    return int(enumerate_colorings(D, Q, **kw).shape[0])


# ---------------------------------------------------------------------------
# shadows

@dataclass(frozen=True)
class ShadowColoring:
    arc_colors: tuple[int, ...]
    face_colors: tuple[int, ...]
    quandle: Quandle
    diagram: LinkDiagram


def _face_plan(D: LinkDiagram):
    """Spanning-tree order for region propagation and the leftover edges."""
    by_face: dict[int, list[int]] = {f: [] for f in range(D.n_faces)}
    for e in sorted(D.edge_arc):
        by_face[D.edge_left_face[e]].append(e)
        by_face[D.edge_right_face[e]].append(e)
    reached = {D.unbounded_face}
    order = [D.unbounded_face]
    tree: list[tuple[int, int, int, bool]] = []
    used: set[int] = set()
    i = 0
    while i < len(order):
        f = order[i]
        i += 1
        for e in by_face[f]:
            l, r = D.edge_left_face[e], D.edge_right_face[e]
            g = l if r == f else r
            if g in reached:
                continue
            reached.add(g)
            order.append(g)
            used.add(e)
            # left = right |> arc ; right = left |>^-1 arc
            tree.append((g, f, D.edge_arc[e], g == r))
    checks = [(D.edge_left_face[e], D.edge_right_face[e], D.edge_arc[e])
              for e in sorted(D.edge_arc) if e not in used]
    return tree, checks


def shadow_faces(D: LinkDiagram, Q: Quandle, colorings: np.ndarray, *,
                 check: bool = True) -> np.ndarray:
    """Region colours for every colouring, shape (count, n_faces)."""
    colorings = np.asarray(colorings)
    n = colorings.shape[0]
    faces = np.zeros((n, D.n_faces), dtype=colorings.dtype if n else np.int32)
    faces[:, D.unbounded_face] = Q.p0
    tree, checks = _face_plan(D)
    op, inv = Q.op_table, Q.inv_table
    for tgt, src, arc, backwards in tree:
        T = inv if backwards else op
        faces[:, tgt] = T[faces[:, src], colorings[:, arc]]
    if check:
        for l, r, arc in checks:
            if not np.array_equal(faces[:, l], op[faces[:, r], colorings[:, arc]]):
                raise ColoringError("region colours are inconsistent around a crossing")
    return faces


def shadow(D: LinkDiagram, Q: Quandle, coloring: Sequence[int]) -> ShadowColoring:
    row = np.asarray([coloring])
    faces = shadow_faces(D, Q, row)[0]
    return ShadowColoring(tuple(int(v) for v in coloring), tuple(int(v) for v in faces), Q, D)


# ---------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class WeightChain:
    terms: tuple[tuple[int, tuple[int, int, int]], ...]


def _weight_slots(D: LinkDiagram):
    """Per crossing: (sign, source corner, arc of y, arc of z)."""
    out = []
    for k, c in enumerate(D.crossings):
        if c.sign > 0:
            out.append((1, (k, 0), c.under_in, c.over))
        else:
            out.append((-1, (k, 1), c.under_out, c.over))
    return out


def weights(S: ShadowColoring) -> WeightChain:
    D = S.diagram
    terms = []
    for sign, corner, ya, za in _weight_slots(D):
        x = S.face_colors[D.corner_face[corner]]
        terms.append((sign, (x, S.arc_colors[ya], S.arc_colors[za])))
    return WeightChain(tuple(terms))


def weight_arrays(D: LinkDiagram, colorings: np.ndarray, faces: np.ndarray):
    """Vectorized weights: signs (n_crossings,) and x, y, z of shape (count, n_crossings)."""
    slots = _weight_slots(D)
    signs = np.array([s[0] for s in slots], dtype=np.int64)
    fidx = [D.corner_face[s[1]] for s in slots]
    x = faces[:, fidx]
    y = colorings[:, [s[2] for s in slots]]
    z = colorings[:, [s[3] for s in slots]]
    return signs, x, y, z


def rack_boundary3(Q: Quandle, x: int, y: int, z: int) -> dict[tuple[int, int], int]:
    """Rack boundary of (x, y, z) as a chain on pairs."""
    op = Q.op_table
    out: dict[tuple[int, int], int] = {}

    def add(t, c):
        out[t] = out.get(t, 0) + c

    # i = 2
    add((x, z), 1)
    add((int(op[x, y]), z), -1)
    # i = 3
    add((x, y), -1)
    add((int(op[x, z]), int(op[y, z])), 1)
    return {k: v for k, v in out.items() if v}


def is_degenerate(chain: dict[tuple, int]) -> bool:
    """True when every surviving tuple has two equal neighbours."""
    return all(any(t[i] == t[i + 1] for i in range(len(t) - 1)) for t, c in chain.items() if c)
