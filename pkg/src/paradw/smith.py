"""Smith normal form over Z, tracking the column transform.

For an integer matrix R (rows are relations on n generators) we find a
unimodular V with R V = U^-1 diag(d) for some unimodular U.  A vector v then
lies in the row lattice of R iff (v V)_i is divisible by d_i for every i,
which gives a normal form for Z^n / rowspace(R).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class SmithForm:
    diag: tuple[int, ...]           # length n; 0 marks a free coordinate
    V: tuple[tuple[int, ...], ...]  # n x n, columns transform coordinates

    def coords(self, v: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of v V, reduced modulo the diagonal."""
        n = len(self.diag)
        out = []
        for j in range(n):
            s = sum(v[i] * self.V[i][j] for i in range(n) if v[i])
            d = self.diag[j]
            out.append(s % d if d else s)
        return tuple(out)

    @property
    def invariant_factors(self) -> tuple[int, ...]:
        """Nontrivial factors (d != 1), free ones reported as 0."""
        return tuple(d for d in self.diag if d != 1)


def smith_form(rows: Sequence[Sequence[int]], n: int) -> SmithForm:
    A = [list(r) for r in rows if any(r)]
    V = [[int(i == j) for j in range(n)] for i in range(n)]
    m = len(A)
    diag = []

    def col_op(j1: int, j2: int, f: int) -> None:
        # column j2 -= f * column j1
        for row in A:
            if row[j1]:
                row[j2] -= f * row[j1]
        for row in V:
            if row[j1]:
                row[j2] -= f * row[j1]

    def col_swap(j1: int, j2: int) -> None:
        for row in A:
            row[j1], row[j2] = row[j2], row[j1]
        for row in V:
            row[j1], row[j2] = row[j2], row[j1]

    t = 0
    while t < min(m, n):
        # pivot: smallest nonzero |entry| in the trailing block
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                x = row[j]
                if x and (best is None or abs(x) < best[0]):
                    best = (abs(x), i, j)
                    if best[0] == 1:
                        break
            if best is not None and best[0] == 1:
                break
        if best is None:
            break
        _, pi, pj = best
        A[t], A[pi] = A[pi], A[t]
        if pj != t:
            col_swap(t, pj)
        while True:
            piv = A[t][t]
            dirty = False
            # clear column t by row operations
            for i in range(t + 1, m):
                if A[i][t]:
                    f = A[i][t] // piv
                    if f:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= f * rt[j]
                    if A[i][t]:
                        dirty = True
            # clear row t by column operations
            for j in range(t + 1, n):
                if A[t][j]:
                    f = A[t][j] // piv
                    if f:
                        col_op(t, j, f)
                    if A[t][j]:
                        dirty = True
            if not dirty:
                # divisibility of the trailing block
                bad = None
                for i in range(t + 1, m):
                    for j in range(t + 1, n):
                        if A[i][j] % piv:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                rt, rb = A[t], A[bad]
                for j in range(t, n):
                    rt[j] += rb[j]
                continue
            # move the smallest remaining entry of row/column t to the pivot
            cand = [(abs(A[i][t]), i, t) for i in range(t, m) if A[i][t]]
            cand += [(abs(A[t][j]), t, j) for j in range(t, n) if A[t][j]]
            _, ci, cj = min(cand)
            if ci != t:
                A[t], A[ci] = A[ci], A[t]
            if cj != t:
                col_swap(t, cj)
        if A[t][t] < 0:
            A[t] = [-x for x in A[t]]
        diag.append(A[t][t])
        t += 1
    diag += [0] * (n - len(diag))
    return SmithForm(tuple(diag), tuple(tuple(r) for r in V))
