"""The Bloch-group-valued quandle 3-cocycle and the resulting link invariant.

Points of P^1(F_q) are encoded as field codes, with ``q`` standing for
infinity.  ``psi(x, y, z)`` is Phi(proj(phi_3(x, y, z))), where the first
slot of phi_3 takes the region colour and p0 = (1, 0).  Since proj(p0) is
infinity, every four-point term that occurs has x1 = infinity, where
Phi(inf, u, v, w) = [(u - v)/(u - w)].
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import colorings as col
from .bloch import BlochElem, BlochGroupData, prebloch_build
from .diagram import LinkDiagram
from .galois import FiniteField
from .groupring import GroupRingSum
from .quandle import Quandle

__all__ = [
    "DomainError",
    "ConsistencyError",
    "NON_GENERIC",
    "check_generic",
    "proj",
    "phi",
    "cross_ratio_class",
    "phi2_chain",
    "phi3_chain",
    "psi",
    "pair",
    "pairings",
    "CocycleResult",
    "cocycle_invariant",
]

NON_GENERIC = (2, 4, 8, 3, 9, 27, 5)


class DomainError(ValueError):
    """Field outside the domain of a computation (genericity or parity)."""


class ConsistencyError(RuntimeError):
    """An internal cross-check failed."""


def check_generic(F: FiniteField) -> None:
    if F.p == 2:
        raise DomainError(f"q = {F.q} is even; the cocycle invariant needs odd generic q")
    if F.q in NON_GENERIC:
        raise DomainError(
            f"q = {F.q} is not generic: q must avoid 2, 4, 8, 3, 9, 27 and 5")


def proj(Q: Quandle, x: int) -> int:
    return int(Q.proj_table[x])


def phi(F: FiniteField, x: int, y: int, z: int) -> int:
    inf = F.q
    if x == inf:
        return F.inv(F.sub(y, z))
    if y == inf:
        return F.sub(z, x)
    if z == inf:
        return F.sub(x, y)
    return F.div(F.mul(F.sub(z, x), F.sub(x, y)), F.sub(z, y))


def cross_ratio_class(F: FiniteField, x1: int, x2: int, x3: int, x4: int) -> BlochElem:
    if len({x1, x2, x3, x4}) < 4:
        return BlochElem({})
    val = F.div(phi(F, x1, x2, x4), phi(F, x1, x2, x3))
    if val in (0, 1):
        raise ConsistencyError("cross ratio of distinct points fell in {0, 1}")
    return BlochElem({val: 1})


def phi2_chain(Q: Quandle, a: int, b: int) -> list[tuple[int, tuple[int, int, int]]]:
    op, p0 = Q.op_table, Q.p0
    return [(1, (p0, a, b)), (-1, (p0, int(op[a, b]), b))]


def phi3_chain(Q: Quandle, r: int, a: int, b: int) -> list[tuple[int, tuple[int, int, int, int]]]:
    op, p0 = Q.op_table, Q.p0
    ra, rb, ab = int(op[r, a]), int(op[r, b]), int(op[a, b])
    rab = int(op[ra, b])
    return [(1, (p0, r, a, b)), (-1, (p0, ra, a, b)), (-1, (p0, rb, ab, b)), (1, (p0, rab, ab, b))]


def psi(Q: Quandle, x: int, y: int, z: int) -> BlochElem:
    out = BlochElem({})
    for s, t in phi3_chain(Q, x, y, z):
        pts = [proj(Q, v) for v in t]
        out = out + cross_ratio_class(Q.F, *pts).scale(s)
    return out


def _phi_inf_table(F: FiniteField, column: dict[int, int]) -> np.ndarray:
    """Generator column of Phi(inf, u, v, w), or -1 where Phi vanishes."""
    q = F.q
    T = np.full((q + 1, q + 1, q + 1), -1, dtype=np.int64)
    for u in range(q):
        for v in range(q):
            if v == u:
                continue
            num = F.sub(u, v)
            for w in range(q):
                if w == u or w == v:
                    continue
                T[u, v, w] = column[F.div(num, F.sub(u, w))]
    return T


def pairings(D: LinkDiagram, Q: Quandle, data: BlochGroupData,
             colorings: np.ndarray | None = None, *, workers: int = 1,
             table: np.ndarray | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Raw P-check coefficient rows (count, n_gens) and exponents for every colouring."""
    if colorings is None:
        colorings = col.enumerate_colorings(D, Q, workers=workers)
    colorings = np.asarray(colorings, dtype=np.int64)
    n = colorings.shape[0]
    ngen = len(data.gens)
    vec = np.zeros((n, ngen), dtype=np.int64)
    if n == 0:
        return vec, np.zeros(0, dtype=np.int64)
    faces = col.shadow_faces(D, Q, colorings).astype(np.int64)
    signs, X, Y, Z = col.weight_arrays(D, colorings, faces)
    if table is None:
        table = _phi_inf_table(Q.F, data.column)
    op = Q.op_table.astype(np.int64)
    P = Q.proj_table
    XY = op[X, Y]
    XZ = op[X, Z]
    YZ = op[Y, Z]
    XYZ = op[XY, Z]
    rows = np.broadcast_to(np.arange(n)[:, None], X.shape)
    for sgn_t, (a, b, c) in ((1, (X, Y, Z)), (-1, (XY, Y, Z)), (-1, (XZ, YZ, Z)), (1, (XYZ, YZ, Z))):
        g = table[P[a], P[b], P[c]]
        w = sgn_t * np.broadcast_to(signs[None, :], g.shape)
        mask = g >= 0
        np.add.at(vec, (rows[mask], g[mask]), w[mask])
    return vec, data.exponents(vec)


def pair(S: col.ShadowColoring, data: BlochGroupData) -> BlochElem:
    """Pairing of psi with the fundamental class of one shadow colouring."""
    out = BlochElem({})
    for sign, (x, y, z) in col.weights(S).terms:
        out = out + psi(S.quandle, x, y, z).scale(sign)
    return out


@dataclass(frozen=True)
class CocycleResult:
    invariant: GroupRingSum
    counts: tuple[int, int]          # colourings over X_1 and X_r0
    per_quandle: tuple[GroupRingSum, GroupRingSum]


def cocycle_invariant(D: LinkDiagram, F: FiniteField, *, data: BlochGroupData | None = None,
                      workers: int = 1) -> CocycleResult:
    """Sum of t^(pairing) over colourings by X_1 and by X_r0."""
    check_generic(F)
    data = data or prebloch_build(F, reduced=True)
    table = _phi_inf_table(F, data.column)
    parts = []
    counts = []
    for r in (1, F.nonsquare()):
        Q = Quandle(F, r)
        _, exps = pairings(D, Q, data, workers=workers, table=table)
        if np.any(exps < 0):
            raise ConsistencyError("a pairing fell outside the Bloch subgroup")
        parts.append(GroupRingSum.from_exponents(data.bloch_order, exps.tolist()))
        counts.append(len(exps))
    total = parts[0] + parts[1]
    return CocycleResult(total, (counts[0], counts[1]), (parts[0], parts[1]))
