"""Pre-Bloch and Bloch groups of a finite field of odd order.

The pre-Bloch group is Z^(q-2) on symbols [x], x in F_q - {0, 1}, modulo the
five-term relations

    [x] - [y] + [y/x] - [(1 - 1/x)/(1 - 1/y)] + [(1 - x)/(1 - y)],  x != y,

and the reduced group additionally identifies
[x] = [1 - 1/x] = [1/(1 - x)] = -[1/x] = -[x/(x - 1)] = -[1 - x].
The Bloch subgroup is the kernel of [x] -> x ^ (1 - x) in a group of order
two, computed as log(x) log(1 - x) mod 2 for a primitive root.

Quotients are handled through a Smith form, so every class has a canonical
coordinate vector.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

import numpy as np

from .galois import FiniteField
from .smith import SmithForm, smith_form

__all__ = [
    "BlochError",
    "BlochElem",
    "BlochGroupData",
    "prebloch_build",
    "five_term",
    "six_fold",
    "wedge",
    "bloch_membership",
    "to_exponent",
]


class BlochError(ValueError):
    pass


@dataclass(frozen=True)
class BlochElem:
    """Integer combination of symbols [x]; keys are field codes."""

    coeffs: Mapping[int, int]

    @staticmethod
    def of(terms: Iterable[tuple[int, int]]) -> "BlochElem":
        out: dict[int, int] = {}
        for x, c in terms:
            out[x] = out.get(x, 0) + c
        return BlochElem({k: v for k, v in out.items() if v})

    def __add__(self, other: "BlochElem") -> "BlochElem":
        return BlochElem.of(list(self.coeffs.items()) + list(other.coeffs.items()))

    def __neg__(self) -> "BlochElem":
        return BlochElem({k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "BlochElem") -> "BlochElem":
        return self + (-other)

    def scale(self, k: int) -> "BlochElem":
        return BlochElem.of((x, k * c) for x, c in self.coeffs.items())


def five_term(F: FiniteField, x: int, y: int) -> BlochElem:
    one = 1
    a = F.div(y, x)
    b = F.div(F.sub(one, F.inv(x)), F.sub(one, F.inv(y)))
    c = F.div(F.sub(one, x), F.sub(one, y))
    return BlochElem.of([(x, 1), (y, -1), (a, 1), (b, -1), (c, 1)])


def six_fold(F: FiniteField, x: int) -> list[BlochElem]:
    """The five relations tying [x] to its images under the symmetric group."""
    one = 1
    inv_x = F.inv(x)
    images = [
        (F.sub(one, inv_x), -1),               # [x] - [1 - 1/x]
        (F.inv(F.sub(one, x)), -1),            # [x] - [1/(1 - x)]
        (inv_x, 1),                            # [x] + [1/x]
        (F.div(x, F.sub(x, one)), 1),          # [x] + [x/(x - 1)]
        (F.sub(one, x), 1),                    # [x] + [1 - x]
    ]
    return [BlochElem.of([(x, 1), (y, s)]) for y, s in images]


def wedge(F: FiniteField, x: BlochElem) -> int:
    """Image of x in the order-two group, as 0 or 1."""
    tot = 0
    for a, c in x.coeffs.items():
        tot += c * F.log(a) * F.log(F.sub(1, a))
    return tot % 2


@dataclass(frozen=True, eq=False)
class BlochGroupData:
    field: FiniteField
    reduced: bool
    gens: tuple[int, ...]                    # generator codes in canonical order
    relation_matrix: tuple[tuple[int, ...], ...]
    snf: SmithForm
    bloch_order: int
    bloch_gen: BlochElem
    bloch_table: Mapping[tuple[int, ...], int]   # class coordinates -> exponent
    wedge_values: tuple[int, ...]

    @cached_property
    def column(self) -> dict[int, int]:
        return {x: i for i, x in enumerate(self.gens)}

    @property
    def cyclic_factors(self) -> tuple[int, ...]:
        return self.snf.invariant_factors

    @property
    def keep(self) -> tuple[int, ...]:
        """Smith coordinates that carry information."""
        return tuple(j for j, d in enumerate(self.snf.diag) if d != 1)

    def vector(self, x: BlochElem) -> list[int]:
        v = [0] * len(self.gens)
        col = self.column
        for a, c in x.coeffs.items():
            if a not in col:
                raise BlochError(f"[{a}] is not a generator (0 and 1 are excluded)")
            v[col[a]] += c
        return v

    def normal_form(self, x: BlochElem) -> tuple[int, ...]:
        full = self.snf.coords(self.vector(x))
        return tuple(full[j] for j in self.keep)

    def is_zero(self, x: BlochElem) -> bool:
        return not any(self.normal_form(x))

    def equal(self, x: BlochElem, y: BlochElem) -> bool:
        return self.is_zero(x - y)

    @cached_property
    def reduction_matrix(self) -> np.ndarray:
        """Generator -> kept Smith coordinates, entries reduced mod the factors."""
        V = self.snf.V
        cols = self.keep
        M = np.zeros((len(self.gens), len(cols)), dtype=np.int64)
        for k, j in enumerate(cols):
            d = self.snf.diag[j]
            for i in range(len(self.gens)):
                M[i, k] = V[i][j] % d if d else V[i][j]
        return M

    @property
    def moduli(self) -> tuple[int, ...]:
        return tuple(self.snf.diag[j] for j in self.keep)

    def exponents(self, vectors: np.ndarray) -> np.ndarray:
        """Exponents for raw coefficient rows of shape (count, n_gens); -1 if outside."""
        vectors = np.asarray(vectors, dtype=np.int64)
        coords = vectors @ self.reduction_matrix
        mods = self.moduli
        for k, d in enumerate(mods):
            if d:
                coords[:, k] %= d
        out = np.full(vectors.shape[0], -1, dtype=np.int64)
        if coords.shape[1] == 0:
            out[:] = 0
            return out
        # group identical rows, then look each class up once
        uniq, inverse = np.unique(coords, axis=0, return_inverse=True)
        look = np.array([self.bloch_table.get(tuple(int(v) for v in row), -1) for row in uniq],
                        dtype=np.int64)
        return look[inverse.reshape(-1)]


def prebloch_build(F: FiniteField, reduced: bool = True) -> BlochGroupData:
    if F.p == 2:
        raise BlochError("the Bloch-group pipeline needs odd q")
    if F.q < 5:
        raise BlochError("q must be at least 5 so that F_q - {0, 1} has two elements")
    gens = tuple(a for a in F.sorted_codes() if a not in (0, 1))
    col = {x: i for i, x in enumerate(gens)}
    n = len(gens)
    rows: list[tuple[int, ...]] = []

    def add_row(el: BlochElem) -> None:
        v = [0] * n
        for a, c in el.coeffs.items():
            v[col[a]] += c
        if any(v):
            rows.append(tuple(v))

    for x in gens:
        for y in gens:
            if x != y:
                add_row(five_term(F, x, y))
    if reduced:
        for x in gens:
            for rel in six_fold(F, x):
                add_row(rel)
    rows = sorted(set(rows))
    snf = smith_form(rows, n)

    w = tuple(wedge(F, BlochElem({x: 1})) for x in gens)
    # kernel lattice of the wedge map on Z^n
    odd = [i for i in range(n) if w[i]]
    lattice = []
    for i in range(n):
        if not w[i]:
            lattice.append({gens[i]: 1})
        else:
            lattice.append({gens[i]: 2})
    for i in odd[1:]:
        lattice.append({gens[i]: 1, gens[odd[0]]: -1})
    keep = [j for j, d in enumerate(snf.diag) if d != 1]
    mods = [snf.diag[j] for j in keep]
    if any(d == 0 for d in mods):
        raise BlochError("pre-Bloch quotient is not finite")

    def coords(el: Mapping[int, int]) -> tuple[int, ...]:
        v = [0] * n
        for a, c in el.items():
            v[col[a]] += c
        full = snf.coords(v)
        return tuple(full[j] for j in keep)

    gen_coords = [coords(el) for el in lattice]

    def addc(a, b):
        return tuple((x + y) % d for x, y, d in zip(a, b, mods))

    zero = tuple(0 for _ in mods)
    # subgroup generated by the kernel lattice, with a witness for each class
    witness: dict[tuple[int, ...], dict[int, int]] = {zero: {}}
    queue = deque([zero])
    while queue:
        c = queue.popleft()
        for g, el in zip(gen_coords, lattice):
            nc = addc(c, g)
            if nc not in witness:
                wit = dict(witness[c])
                for a, k in el.items():
                    wit[a] = wit.get(a, 0) + k
                witness[nc] = wit
                queue.append(nc)
    order = len(witness)

    def elem_order(c):
        k, x = 1, c
        while x != zero:
            x = addc(x, c)
            k += 1
        return k

    gen_class = None
    gen_elem = None
    for x in gens:
        c = coords({x: 1})
        if c in witness and elem_order(c) == order:
            gen_class, gen_elem = c, BlochElem({x: 1})
            break
    if gen_class is None:
        for c, wit in witness.items():   # insertion order is breadth-first
            if elem_order(c) == order:
                gen_class, gen_elem = c, BlochElem.of(wit.items())
                break
    if gen_class is None:
        raise BlochError(f"Bloch subgroup of order {order} is not cyclic")
    table = {}
    c = zero
    for k in range(order):
        table[c] = k
        c = addc(c, gen_class)
    return BlochGroupData(
        field=F,
        reduced=reduced,
        gens=gens,
        relation_matrix=tuple(rows),
        snf=snf,
        bloch_order=order,
        bloch_gen=gen_elem,
        bloch_table=table,
        wedge_values=w,
    )


def bloch_membership(x: BlochElem, data: BlochGroupData) -> bool:
    """Whether the class of x lies in the Bloch subgroup."""
    return data.normal_form(x) in data.bloch_table


def to_exponent(x: BlochElem, data: BlochGroupData) -> int:
    k = data.bloch_table.get(data.normal_form(x))
    if k is None:
        raise BlochError("element does not lie in the Bloch subgroup")
    return k
