"""Oriented link diagrams from PD codes.

A crossing ``X[a,b,c,d]`` lists its four edge labels counterclockwise,
starting from the incoming under-strand ``a``; the under-strand leaves
through ``c``.  We place ``a`` at south, ``b`` east, ``c`` north, ``d`` west,
so the crossing is positive exactly when the over-strand runs ``d -> b``.

Corner ``(k, s)`` is the region at crossing ``k`` between slot ``s`` and slot
``s + 1`` (counterclockwise).  Faces are traced by leaving a corner along its
first slot; the traced face is always on the left of the direction of travel.

Arcs are maximal chains of edges joined through over-passes.  For a colored
diagram the region rule is ``colour(right of arc) |> colour(arc) = colour(left
of arc)``.
"""
from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from functools import cached_property
from importlib import resources
from typing import Iterable, Sequence

__all__ = [
    "DiagramError",
    "Crossing",
    "LinkDiagram",
    "WirtingerData",
    "parse_pd",
    "read_pd_file",
    "bundled_knots",
    "plat_diagram",
    "two_bridge_diagram",
    "torus_link_diagram",
    "twist_knot_diagram",
    "wirtinger",
    "determinant",
]


class DiagramError(ValueError):
    """Malformed or inconsistent link diagram."""


@dataclass(frozen=True)
class Crossing:
    """One crossing with its edges resolved into arcs."""

    pd: tuple[int, int, int, int]
    sign: int
    under_in: int   # arc indices
    under_out: int
    over: int


@dataclass(frozen=True)
class WirtingerData:
    """Relations ``out = in |>^sign over``, one per crossing, on arc indices."""

    generators: tuple[int, ...]
    relations: tuple[tuple[int, int, int, int], ...]  # (out, in, over, sign)


@dataclass(frozen=True, eq=False)
class LinkDiagram:
    pd: tuple[tuple[int, int, int, int], ...]
    crossings: tuple[Crossing, ...]
    n_arcs: int
    edge_arc: dict[int, int]
    edge_left_face: dict[int, int]
    edge_right_face: dict[int, int]
    faces: tuple[tuple[tuple[int, int], ...], ...]
    corner_face: dict[tuple[int, int], int]
    components: tuple[tuple[int, ...], ...]   # arc indices per component
    component_edges: tuple[tuple[int, ...], ...]
    unbounded_face: int
    bridges: tuple[int, int] | None = None
    name: str = ""

    @property
    def arcs(self) -> range:
        return range(self.n_arcs)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def n_edges(self) -> int:
        return len(self.edge_arc)

    @property
    def signs(self) -> tuple[int, ...]:
        return tuple(c.sign for c in self.crossings)

    def with_unbounded(self, face: int) -> "LinkDiagram":
        if not 0 <= face < self.n_faces:
            raise DiagramError(f"no face {face}")
        return replace(self, unbounded_face=face)

    def with_bridges(self, z1: int, z2: int) -> "LinkDiagram":
        return replace(self, bridges=(z1, z2))

    def mirror(self) -> "LinkDiagram":
        """Mirror image: every crossing switched."""
        return parse_pd(" ".join(_fmt(t) for t in _mirror_pd(self.pd)), name=self.name + "*")

    def reversed(self) -> "LinkDiagram":
        """All components reversed (the PD code is relabelled accordingly)."""
        return parse_pd(" ".join(_fmt(t) for t in _reverse_pd(self.pd, self.component_edges)),
                        name=self.name)

    def to_pd_string(self) -> str:
        return " ".join(_fmt(t) for t in self.pd)

    def __repr__(self) -> str:
        label = f"{self.name!r}, " if self.name else ""
        return (f"LinkDiagram({label}crossings={self.n_crossings}, arcs={self.n_arcs}, "
                f"faces={self.n_faces}, components={len(self.components)})")

    @cached_property
    def arc_edges(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.n_arcs)]
        for e in sorted(self.edge_arc):
            out[self.edge_arc[e]].append(e)
        return tuple(tuple(x) for x in out)


def _fmt(t: Sequence[int]) -> str:
    return "X[" + ",".join(str(v) for v in t) + "]"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"X\[\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*,\s*(-?\d+)\s*\]")


def _tokenize(text: str) -> list[tuple[int, int, int, int]]:
    text = text.strip()
    if not text:
        raise DiagramError("empty PD code")
    out = []
    pos = 0
    for m in _TOKEN.finditer(text):
        if text[pos:m.start()].strip(" ,\t\n"):
            raise DiagramError(f"malformed PD token near {text[pos:m.start()]!r}")
        out.append(tuple(int(g) for g in m.groups()))
        pos = m.end()
    if text[pos:].strip(" ,\t\n"):
        raise DiagramError(f"malformed PD token near {text[pos:]!r}")
    if not out:
        raise DiagramError("no crossings found")
    return out


def parse_pd(text: str | Sequence[Sequence[int]], *, name: str = "",
             arc_order: Sequence[int] | None = None,
             bridges: tuple[int, int] | None = None) -> LinkDiagram:
    """Build a diagram from PD text or a list of 4-tuples.

    ``arc_order`` optionally lists one edge label per arc; arcs are then
    numbered in that order, otherwise by their least edge label.
    ``bridges`` is a pair of edge labels whose arcs are the designated bridge
    arcs ``Z1, Z2``.
    """
    pd = _tokenize(text) if isinstance(text, str) else [tuple(int(v) for v in t) for t in text]
    for t in pd:
        if len(t) != 4:
            raise DiagramError(f"crossing {t} does not have four entries")
    occ: dict[int, list[tuple[int, int]]] = {}
    for k, t in enumerate(pd):
        for s, e in enumerate(t):
            occ.setdefault(e, []).append((k, s))
    bad = sorted(e for e, v in occ.items() if len(v) != 2)
    if bad:
        raise DiagramError(f"edge labels {bad} do not appear exactly twice")

    def mate(k: int, s: int) -> tuple[int, int]:
        a, b = occ[pd[k][s]]
        if a == (k, s):
            return b
        return a

    # head[e] = (crossing, slot) where e enters; tail[e] where it leaves
    head: dict[int, tuple[int, int]] = {}
    tail: dict[int, tuple[int, int]] = {}

    def orient(e: int, t: tuple[int, int], h: tuple[int, int]) -> None:
        if e in head and (head[e] != h or tail[e] != t):
            raise DiagramError(f"inconsistent orientation on edge {e}")
        head[e], tail[e] = h, t

    # walk every component from its under-passes
    component_edges: list[tuple[int, ...]] = []
    seen: set[int] = set()
    starts = sorted((pd[k][0], k) for k in range(len(pd)))
    for _, k0 in starts:
        if pd[k0][0] in seen:
            continue
        walk = []
        k, s = k0, 0  # entering the under-strand at slot 0
        while True:
            if s == 2:
                raise DiagramError(f"edge {pd[k][s]} enters crossing {k} on the outgoing under slot")
            out_slot = (s + 2) % 4
            e_out = pd[k][out_slot]
            if e_out in seen:
                if tail[e_out] != (k, out_slot):
                    raise DiagramError(f"inconsistent orientation walk at edge {e_out}")
                break
            seen.add(e_out)
            walk.append(e_out)
            nk, ns = mate(k, out_slot)
            orient(e_out, (k, out_slot), (nk, ns))
            k, s = nk, ns
        component_edges.append(tuple(walk))
    # components passing only over other strands follow label order
    rest = sorted(set(occ) - seen)
    while rest:
        e0 = min(rest)
        comp = _over_only_component(pd, occ, e0, mate)
        for e, t, h in comp:
            orient(e, t, h)
            seen.add(e)
        component_edges.append(tuple(e for e, _, _ in comp))
        rest = sorted(set(occ) - seen)

    for e in occ:
        if e not in head:
            raise DiagramError(f"edge {e} has no orientation")

    signs = []
    for k, t in enumerate(pd):
        if head[t[0]] != (k, 0) or tail[t[2]] != (k, 2):
            raise DiagramError(f"crossing {k}: under-strand is not oriented a -> c")
        if head[t[3]] == (k, 3) and tail[t[1]] == (k, 1):
            signs.append(1)
        elif head[t[1]] == (k, 1) and tail[t[3]] == (k, 3):
            signs.append(-1)
        else:
            raise DiagramError(f"crossing {k}: over-strand orientation is inconsistent")

    # arcs: union edges through over-passes
    parent = {e: e for e in occ}

    def find(e: int) -> int:
        while parent[e] != e:
            parent[e] = parent[parent[e]]
            e = parent[e]
        return e

    for t in pd:
        ra, rb = find(t[1]), find(t[3])
        if ra != rb:
            parent[ra] = rb
    groups: dict[int, list[int]] = {}
    for e in occ:
        groups.setdefault(find(e), []).append(e)
    if arc_order is not None:
        roots = [find(e) for e in arc_order]
        if sorted(roots) != sorted(groups) or len(set(roots)) != len(roots):
            raise DiagramError("arc_order must name every arc exactly once")
    else:
        roots = sorted(groups, key=lambda r: min(groups[r]))
    arc_of_root = {r: i for i, r in enumerate(roots)}
    edge_arc = {e: arc_of_root[find(e)] for e in occ}

    crossings = tuple(
        Crossing(tuple(t), sg, edge_arc[t[0]], edge_arc[t[2]], edge_arc[t[1]])
        for t, sg in zip(pd, signs)
    )

    # faces by corner tracing
    corner_face: dict[tuple[int, int], int] = {}
    faces: list[tuple[tuple[int, int], ...]] = []
    left: dict[int, int] = {}
    right: dict[int, int] = {}
    for k in range(len(pd)):
        for s in range(4):
            if (k, s) in corner_face:
                continue
            fid = len(faces)
            walk = []
            ck, cs = k, s
            while (ck, cs) not in corner_face:
                corner_face[(ck, cs)] = fid
                walk.append((ck, cs))
                e = pd[ck][cs]
                nk, ns = mate(ck, cs)
                if tail[e] == (ck, cs):
                    left[e] = fid
                else:
                    right[e] = fid
                ck, cs = nk, (ns - 1) % 4
            if (ck, cs) != (k, s):
                raise DiagramError("face walk did not close")
            faces.append(tuple(walk))
    if len(faces) != len(pd) + 2:
        raise DiagramError(
            f"Euler check failed: {len(faces)} faces, {2 * len(pd)} edges, {len(pd)} crossings")

    comp_arcs = []
    for ce in component_edges:
        arcs_here = []
        for e in ce:
            a = edge_arc[e]
            if a not in arcs_here:
                arcs_here.append(a)
        comp_arcs.append(tuple(arcs_here))

    br = None
    if bridges is not None:
        br = (edge_arc[bridges[0]], edge_arc[bridges[1]])
    e_min = min(occ)
    return LinkDiagram(
        pd=tuple(tuple(t) for t in pd),
        crossings=crossings,
        n_arcs=len(roots),
        edge_arc=edge_arc,
        edge_left_face=left,
        edge_right_face=right,
        faces=tuple(faces),
        corner_face=corner_face,
        components=tuple(comp_arcs),
        component_edges=tuple(component_edges),
        unbounded_face=left[e_min],
        bridges=br,
        name=name,
    )


def _over_only_component(pd, occ, e0, mate):
    """Orient a component that never passes under, using label order."""
    labels = []
    # collect the component's labels by walking straight through crossings
    k, s = occ[e0][0]
    start = (k, s)
    steps = []
    while True:
        e = pd[k][s]
        nk, ns = mate(k, s)
        steps.append((e, (k, s), (nk, ns)))
        labels.append(e)
        k, s = nk, (ns + 2) % 4
        if (k, s) == start:
            break
    order = sorted(labels)
    forward = len(labels) < 2 or order[(order.index(labels[0]) + 1) % len(order)] == labels[1]
    if forward:
        return steps
    return [(e, h, t) for e, t, h in reversed(steps)]


def _mirror_pd(pd):
    # rotating each tuple one step moves the under-strand role to the old over-strand
    out = []
    D = parse_pd(pd)
    for k, t in enumerate(pd):
        if D.crossings[k].sign > 0:
            out.append((t[3], t[0], t[1], t[2]))
        else:
            out.append((t[1], t[2], t[3], t[0]))
    return out


def _reverse_pd(pd, component_edges):
    relabel = {}
    nxt = 1
    for ce in component_edges:
        rev = list(reversed(ce))
        for e in rev:
            relabel[e] = nxt
            nxt += 1
    out = []
    for t in pd:
        a, b, c, d = (relabel[v] for v in t)
        # incoming under is now the old outgoing one
        out.append((c, d, a, b))
    return out


def read_pd_file(path_or_text: str, *, is_text: bool = False) -> dict[str, LinkDiagram]:
    """Read ``name: X[..] X[..] ...`` lines; ``#`` starts a comment."""
    if is_text:
        text = path_or_text
    else:
        with open(path_or_text, encoding="utf-8") as fh:
            text = fh.read()
    out: dict[str, LinkDiagram] = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if ":" not in line:
            raise DiagramError(f"line {lineno}: expected 'name: PD code'")
        name, code = line.split(":", 1)
        name = name.strip()
        if name in out:
            raise DiagramError(f"line {lineno}: duplicate name {name!r}")
        out[name] = parse_pd(code, name=name)
    return out


def bundled_knots() -> dict[str, LinkDiagram]:
    """Prime knots up to seven crossings from the packaged PD file."""
    text = resources.files("paradw").joinpath("data/knots_le7.pd").read_text(encoding="utf-8")
    return read_pd_file(text, is_text=True)


# ---------------------------------------------------------------------------
# 4-plats

# ports of a braid crossing, counterclockwise: top-right, top-left, bottom-left,
# bottom-right; strands join opposite ports
_TR, _TL, _BL, _BR = range(4)


def plat_diagram(word: Sequence[tuple[int, int]], *, name: str = "",
                 seeds: Sequence[tuple[int, int]] | None = None) -> tuple[LinkDiagram, list]:
    """Plat closure of a 4-strand braid word.

    ``word`` is a sequence of ``(i, e)`` for the generator ``sigma_i^e``
    (i in 1..3, e = +1 or -1), read top to bottom.  Sign +1 puts the strand
    from top-left to bottom-right over.  Caps join positions (1,2) and (3,4)
    at both ends.  Each component is oriented by a seed ``(crossing, port)``
    through which it leaves; the default seed is the first port met.

    Returns the diagram and, for every crossing, the PD edge labels at its
    four braid ports (TR, TL, BL, BR).
    """
    n = len(word)
    if n == 0:
        raise DiagramError("empty braid word")
    link: dict = {}
    current = {pos: ("top", pos) for pos in range(1, 5)}
    for k, (i, e) in enumerate(word):
        if i not in (1, 2, 3) or e not in (1, -1):
            raise DiagramError(f"bad generator {(i, e)}")
        for node, port in ((current[i], (k, _TL)), (current[i + 1], (k, _TR))):
            link[node] = port
            link[port] = node
        current[i], current[i + 1] = (k, _BL), (k, _BR)
    for pos in range(1, 5):
        link[current[pos]] = ("bot", pos)
        link[("bot", pos)] = current[pos]
    cap = {}
    for end in ("top", "bot"):
        for a, b in ((1, 2), (3, 4)):
            cap[(end, a)], cap[(end, b)] = (end, b), (end, a)

    def partner(port):
        node = link[port]
        while node in cap:
            node = link[cap[node]]
        return node

    # components and edge labels
    label: dict[tuple[int, int], int] = {}
    comps: list[list[tuple[int, int]]] = []
    seed_list = list(seeds) if seeds else []
    all_ports = [(k, s) for k in range(n) for s in range(4)]
    nxt = 1
    while len(label) < 4 * n:
        if seed_list:
            start = seed_list.pop(0)
            if start in label:
                raise DiagramError(f"seed {start} lies on an already oriented component")
        else:
            start = next(p for p in all_ports if p not in label)
        comp = []
        port = start
        while port not in label:
            other = partner(port)
            label[port] = label[other] = nxt
            comp.append(port)
            nxt += 1
            port = (other[0], (other[1] + 2) % 4)
        comps.append(comp)
    pd = []
    for k, (i, e) in enumerate(word):
        under = (_TR, _BL) if e > 0 else (_TL, _BR)
        # incoming under port: the one not used as a leaving port
        a = under[0] if under[1] in _leaving(comps, k) else under[1]
        pd.append(tuple(label[(k, (a + j) % 4)] for j in range(4)))
    ports = [tuple(label[(k, s)] for s in range(4)) for k in range(n)]
    return parse_pd(pd, name=name), ports


def _leaving(comps, k):
    return {s for comp in comps for (kk, s) in comp if kk == k}


def two_bridge_diagram(cf: Sequence[int], *, name: str = "") -> LinkDiagram:
    """4-plat for the continued fraction ``[a1, ..., an]`` (Conway notation).

    The braid is sigma_2^a1 sigma_1^-a2 sigma_2^a3 ...; an even-length
    fraction is first rewritten as [..., an - 1, 1].
    """
    cf = list(cf)
    if not cf or any(a == 0 for a in cf):
        raise DiagramError("continued fraction entries must be nonzero")
    if len(cf) % 2 == 0:
        if cf[-1] == 1:
            cf = cf[:-2] + [cf[-2] + 1]
        else:
            cf = cf[:-1] + [cf[-1] - 1, 1]
    word = []
    for idx, a in enumerate(cf):
        gen, sgn = (2, 1) if idx % 2 == 0 else (1, -1)
        e = sgn if a > 0 else -sgn
        word += [(gen, e)] * abs(a)
    return plat_diagram(word, name=name)[0]


TORUS_SEEDS = [(0, _BL), (0, _TL)]


def torus_link_diagram(m: int) -> LinkDiagram:
    """The (2, 2m) torus link with arcs numbered Z1, ..., Z2m.

    Relations read ``Z_{2k+1} = Z_{2k-1} |> Z_{2k}`` and
    ``Z_{2k} = Z_{2k+2} |> Z_{2k+1}`` with indices of Z taken mod 2m, which
    is the conjugation pattern ``Z_{2k+1} = W^k Z_1 W^-k``,
    ``Z_{2k+2} = W^k Z_2 W^-k`` for ``W = Z_2^-1 Z_1``.
    """
    if not isinstance(m, int) or m < 1:
        raise DiagramError("torus link needs m >= 1")
    word = [(2, 1)] * (2 * m)
    D, _ = plat_diagram(word, seeds=TORUS_SEEDS)
    c = D.crossings
    Z = [None, c[0].under_in, c[0].over]
    for j in range(2 * m):
        k = j // 2 + 1
        if j % 2 == 0:
            ok = c[j].over == Z[2 * k] and c[j].under_in == Z[2 * k - 1]
            Z.append(c[j].under_out)
        else:
            ok = c[j].over == Z[2 * k + 1] and c[j].under_out == Z[2 * k]
            Z.append(c[j].under_in)
        if not ok or c[j].sign != 1:
            raise AssertionError("torus link diagram does not follow the expected pattern")
    if Z[2 * m + 1] != Z[1] or Z[2 * m + 2] != Z[2] or len(set(Z[1:2 * m + 1])) != 2 * m:
        raise AssertionError("torus link arcs do not close up")
    order_edges = [D.arc_edges[a][0] for a in Z[1:2 * m + 1]]
    return parse_pd(D.pd, name=f"T(2,{2 * m})", arc_order=order_edges,
                    bridges=(order_edges[0], order_edges[1]))


def twist_knot_diagram(m: int) -> LinkDiagram:
    """Twist knot with 2m twists and a two-crossing clasp (4_1 for m = 1).

    Built as the 4-plat of sigma_2^2m sigma_1^-1 sigma_2; the bridge arcs
    Z1, Z2 are the arcs through the two top caps.
    """
    if not isinstance(m, int) or m < 1:
        raise DiagramError("twist knot needs m >= 1")
    word = [(2, 1)] * (2 * m) + [(1, -1), (2, 1)]
    D, ports = plat_diagram(word, seeds=[(0, _BL)])
    z1 = ports[0][_TR]   # edge from the (3,4) cap into the twist region
    z2 = ports[0][_TL]   # edge from the (1,2) cap
    return parse_pd(D.pd, name=f"K_{m}", bridges=(z1, z2))


# ---------------------------------------------------------------------------

def wirtinger(D: LinkDiagram) -> WirtingerData:
    rels = tuple((c.under_out, c.under_in, c.over, c.sign) for c in D.crossings)
    return WirtingerData(tuple(D.arcs), rels)


def face_checkerboard(D: LinkDiagram) -> list[int]:
    """Two-colouring of faces; adjacent faces across any edge differ."""
    adj: dict[int, list[int]] = {f: [] for f in range(D.n_faces)}
    for e in D.edge_arc:
        l, r = D.edge_left_face[e], D.edge_right_face[e]
        adj[l].append(r)
        adj[r].append(l)
    color = [-1] * D.n_faces
    color[0] = 0
    queue = deque([0])
    while queue:
        f = queue.popleft()
        for g in adj[f]:
            if color[g] < 0:
                color[g] = 1 - color[f]
                queue.append(g)
            elif color[g] == color[f]:
                raise DiagramError("faces do not admit a checkerboard colouring")
    return color


def goeritz_matrix(D: LinkDiagram) -> list[list[int]]:
    color = face_checkerboard(D)
    shaded = [f for f in range(D.n_faces) if color[f] == 0]
    idx = {f: i for i, f in enumerate(shaded)}
    n = len(shaded)
    G = [[0] * n for _ in range(n)]
    for k in range(D.n_crossings):
        f0 = D.corner_face[(k, 0)]
        if color[f0] == 0:
            i, j, eta = f0, D.corner_face[(k, 2)], 1
        else:
            i, j, eta = D.corner_face[(k, 1)], D.corner_face[(k, 3)], -1
        if i == j:
            continue
        G[idx[i]][idx[j]] -= eta
        G[idx[j]][idx[i]] -= eta
    for i in range(n):
        G[i][i] = -sum(G[i][j] for j in range(n) if j != i)
    return G


def _bareiss_det(M: list[list[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k] != 0), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def determinant(D: LinkDiagram) -> int:
    """|det| of a reduced Goeritz matrix, i.e. |H_1| of the double branched cover."""
    G = goeritz_matrix(D)
    if len(G) <= 1:
        return 1
    reduced = [row[1:] for row in G[1:]]
    return abs(_bareiss_det(reduced))
