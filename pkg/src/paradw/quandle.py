"""The parabolic quandle X_r over F_q.

Elements are nonzero row vectors (a, b) up to sign, with
``(a, b) |> (c, d) = (a, b) M`` where ``M = [[1 + rcd, rd^2], [-rc^2, 1 - rcd]]``
is the meridian matrix of (c, d).  Elements are numbered 0..N-1 in the
lexicographic order of their canonical representatives, and the operation
and its right inverse are kept as N x N tables so colourings can be
propagated with array indexing.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import sl2
from .diagram import LinkDiagram
from .galois import FieldElem, FiniteField

__all__ = [
    "QuandleError",
    "Quandle",
    "QuandleElem",
    "ParabolicRep",
    "quandle_create",
    "q_op",
    "q_invop",
    "meridian_matrix",
    "rep_from_coloring",
]


class QuandleError(ValueError):
    pass


class Quandle:
    """X_r for a field F and a nonzero parameter r (given as a code)."""

    def __init__(self, F: FiniteField, r: int):
        if r == 0:
            raise QuandleError("the quandle parameter r must be nonzero")
        self.F = F
        self.r = int(r)
        q = F.q
        rank = F.rank
        neg = F._neg_table
        pairs = []
        for a in range(q):
            for b in range(q):
                if a == 0 and b == 0:
                    continue
                na, nb = int(neg[a]), int(neg[b])
                if (rank[na], rank[nb]) < (rank[a], rank[b]):
                    continue
                pairs.append((a, b))
        pairs.sort(key=lambda ab: (rank[ab[0]], rank[ab[1]]))
        self.pairs = np.asarray(pairs, dtype=np.int64)
        self.size = len(pairs)
        index = np.full(q * q, -1, dtype=np.int64)
        ids = np.arange(self.size)
        A, B = self.pairs[:, 0], self.pairs[:, 1]
        index[A * q + B] = ids
        index[neg[A] * q + neg[B]] = ids
        self._index = index

    def __repr__(self) -> str:
        return f"Quandle(q={self.F.q}, r={self.F(self.r)!r}, size={self.size})"

    def __len__(self) -> int:
        return self.size

    def index(self, a: int, b: int) -> int:
        i = int(self._index[a * self.F.q + b])
        if i < 0:
            raise QuandleError("(0, 0) is not an element of X_r")
        return i

    def index_arr(self, a, b) -> np.ndarray:
        return self._index[np.asarray(a) * self.F.q + np.asarray(b)]

    def elem(self, i: int) -> "QuandleElem":
        return QuandleElem(self, int(i))

    def elements(self) -> list["QuandleElem"]:
        return [QuandleElem(self, i) for i in range(self.size)]

    @property
    def p0(self) -> int:
        """Index of (1, 0)."""
        return self.index(1, 0)

    @cached_property
    def meridians(self) -> np.ndarray:
        """Flat meridian matrices, shape (N, 4)."""
        F, r = self.F, self.r
        a, b = self.pairs[:, 0], self.pairs[:, 1]
        rab = F.mul_arr(r, F.mul_arr(a, b))
        out = np.empty((self.size, 4), dtype=np.int64)
        out[:, 0] = F.add_arr(1, rab)
        out[:, 1] = F.mul_arr(r, F.mul_arr(b, b))
        out[:, 2] = F.neg_arr(F.mul_arr(r, F.mul_arr(a, a)))
        out[:, 3] = F.sub_arr(1, rab)
        return out

    @cached_property
    def op_table(self) -> np.ndarray:
        """``op_table[i, j]`` is the index of ``x_i |> x_j``."""
        F = self.F
        M = self.meridians
        a = self.pairs[:, 0][:, None]
        b = self.pairs[:, 1][:, None]
        m0, m1, m2, m3 = (M[:, k][None, :] for k in range(4))
        na = F.add_arr(F.mul_arr(a, m0), F.mul_arr(b, m2))
        nb = F.add_arr(F.mul_arr(a, m1), F.mul_arr(b, m3))
        return self.index_arr(na, nb).astype(np.int32)

    @cached_property
    def inv_table(self) -> np.ndarray:
        """``inv_table[i, j]`` is the unique z with ``z |> x_j = x_i``."""
        op = self.op_table
        out = np.empty_like(op)
        cols = np.broadcast_to(np.arange(self.size), op.shape)
        out[op, cols] = np.broadcast_to(np.arange(self.size)[:, None], op.shape)
        return out

    @cached_property
    def proj_table(self) -> np.ndarray:
        """Projective point of each element: code of a/b, or q for infinity."""
        F = self.F
        a, b = self.pairs[:, 0], self.pairs[:, 1]
        out = np.full(self.size, F.q, dtype=np.int64)
        nz = b != 0
        out[nz] = F.mul_arr(a[nz], F.inv_arr(b[nz]))
        return out


def quandle_create(F: FiniteField, r: FieldElem | int) -> Quandle:
    code = r.value if isinstance(r, FieldElem) else F(int(r)).value
    return Quandle(F, code)


@dataclass(frozen=True)
class QuandleElem:
    quandle: Quandle
    index: int

    @property
    def a(self) -> FieldElem:
        return FieldElem(self.quandle.F, int(self.quandle.pairs[self.index, 0]))

    @property
    def b(self) -> FieldElem:
        return FieldElem(self.quandle.F, int(self.quandle.pairs[self.index, 1]))

    def __repr__(self) -> str:
        return f"({self.a!r}, {self.b!r})"

    def __lt__(self, other: "QuandleElem") -> bool:
        return self.index < other.index


def _same(x: QuandleElem, y: QuandleElem) -> Quandle:
    if x.quandle is not y.quandle:
        raise QuandleError("elements of different quandles")
    return x.quandle


def q_op(x: QuandleElem, y: QuandleElem) -> QuandleElem:
    Q = _same(x, y)
    return QuandleElem(Q, int(Q.op_table[x.index, y.index]))


def q_invop(x: QuandleElem, y: QuandleElem) -> QuandleElem:
    Q = _same(x, y)
    return QuandleElem(Q, int(Q.inv_table[x.index, y.index]))


def meridian_matrix(x: QuandleElem) -> tuple[tuple[FieldElem, FieldElem], tuple[FieldElem, FieldElem]]:
    Q = x.quandle
    m = [FieldElem(Q.F, int(v)) for v in Q.meridians[x.index]]
    return ((m[0], m[1]), (m[2], m[3]))


@dataclass(frozen=True)
class ParabolicRep:
    """Images of the arc meridians, as flat matrices."""

    assignment: tuple[sl2.Mat, ...]
    r: int


def rep_from_coloring(D: LinkDiagram, coloring: Sequence[int], Q: Quandle) -> ParabolicRep:
    """Meridian matrices of a colouring, checked against every Wirtinger relation.

    ``coloring`` lists one quandle index per arc.
    """
    if len(coloring) != D.n_arcs:
        raise QuandleError("colouring length does not match the number of arcs")
    F = Q.F
    mats = tuple(tuple(int(v) for v in Q.meridians[int(c)]) for c in coloring)
    for k, cr in enumerate(D.crossings):
        xo, xi, y = mats[cr.under_out], mats[cr.under_in], mats[cr.over]
        if cr.sign > 0:
            lhs, rhs = xo, sl2.mul(F, sl2.inv(F, y), sl2.mul(F, xi, y))
        else:
            lhs, rhs = xi, sl2.mul(F, sl2.inv(F, y), sl2.mul(F, xo, y))
        if lhs != rhs:
            raise QuandleError(f"colouring violates the relation at crossing {k}")
    return ParabolicRep(mats, Q.r)
