"""Parabolic DW sums over F_{2^j} for links whose double branched cover is a lens space.

Every parabolic representation is a colouring by X_1.  The element
``g = f(Z2)^-1 f(Z1)`` (bridge arcs Z1, Z2) is the image of a generator of
pi_1 of the double branched cover; its characteristic polynomial sorts the
representation into the identity, unipotent, split torus ``T`` or
non-split torus ``K`` class.  For T and K the homomorphism Z/m -> Z/N,
1 -> c, acts on H_3 by multiplication with ``c^2 m / N``, and the lens space
L(m, n) contributes the class n of H_3(Z/m) = Z/m.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
import numpy as np

from . import sl2
from .colorings import enumerate_colorings
from .diagram import LinkDiagram, determinant, torus_link_diagram, twist_knot_diagram
from .galois import FiniteField
from .groupring import GroupRingSum
from .quandle import ParabolicRep, Quandle

__all__ = [
    "LensError",
    "SubgroupClass",
    "LensData",
    "LensSums",
    "torus_generator",
    "k_generator",
    "branch_generator",
    "branch_generators",
    "classify",
    "conjugate_into_K",
    "h3_cyclic_map",
    "lens_class",
    "partial_sums",
    "closed_form_T",
    "closed_form_K",
    "fraction_lens",
    "family_lens",
    "family_diagram",
]


class LensError(ValueError):
    pass


@dataclass(frozen=True)
class SubgroupClass:
    tag: str          # "Id", "UType", "TType" or "KType"
    c: int = 0


@dataclass(frozen=True)
class LensData:
    m: int
    n: int

    def __post_init__(self):
        if self.m < 1 or gcd(self.m, self.n) != 1:
            raise LensError(f"L({self.m}, {self.n}) needs m >= 1 and gcd(m, n) = 1")


def _require_char2(F: FiniteField) -> None:
    if F.p != 2:
        raise LensError("the lens-space pipeline works in characteristic 2")


def torus_generator(F: FiniteField) -> sl2.Mat:
    X = F.gen.value
    return (X, 0, 0, F.inv(X))


def k_generator(F: FiniteField) -> sl2.Mat:
    """[[0, -1], [1, X]]."""
    return (0, F.neg(1), 1, F.gen.value)


def branch_generator(F: FiniteField, rep: ParabolicRep, D: LinkDiagram) -> sl2.Mat:
    """f(Z2)^-1 f(Z1) for one representation."""
    if D.bridges is None:
        raise LensError("diagram has no designated bridge arcs")
    z1, z2 = D.bridges
    return sl2.mul(F, sl2.inv(F, rep.assignment[z2]), rep.assignment[z1])


def branch_generators(D: LinkDiagram, Q: Quandle, colorings: np.ndarray) -> np.ndarray:
    """g for every colouring, shape (count, 4)."""
    if D.bridges is None:
        raise LensError("diagram has no designated bridge arcs")
    z1, z2 = D.bridges
    M = Q.meridians
    A = M[np.asarray(colorings)[:, z1]]
    B = M[np.asarray(colorings)[:, z2]]
    return sl2.mul_arr(Q.F, sl2.inv_arr(Q.F, B), A)


def _log_base(F: FiniteField, base: int) -> dict[int, int]:
    out, x = {}, 1
    for k in range(F.q - 1):
        if x in out:
            break
        out[x] = k
        x = F.mul(x, base)
    return out


def conjugate_into_K(F: FiniteField, g: sl2.Mat) -> sl2.Mat:
    """h with h g h^-1 = [[0, -1], [1, a + d]] for g with irreducible characteristic polynomial."""
    _require_char2(F)
    if _splits(F, g):
        raise LensError("characteristic polynomial is reducible")
    a, b, c, d = g
    s = F.sqrt
    if c != 0:
        rc = s(c)
        ri = F.inv(rc)
        h = (rc, F.mul(d, ri), F.mul(F.add(a, d), rc), F.add(F.mul(b, rc), F.mul(F.mul(d, d), ri)))
    else:
        rb = s(b)
        ri = F.inv(rb)
        h = (F.mul(a, ri), rb, F.add(F.mul(F.mul(a, a), ri), F.mul(c, rb)), F.mul(F.add(a, d), rb))
    target = (0, F.neg(1), 1, F.add(a, d))
    if sl2.det(F, h) != 1 or sl2.mul(F, sl2.mul(F, h, g), sl2.inv(F, h)) != target:
        raise AssertionError("conjugator does not satisfy h g h^-1 = mu_X")
    return h


def _splits(F: FiniteField, g: sl2.Mat) -> bool:
    tr = sl2.trace(F, g)
    # t^2 - tr t + 1 has a root in F
    return any(F.add(F.sub(F.mul(x, x), F.mul(tr, x)), 1) == 0 for x in range(1, F.q))


def classify(F: FiniteField, g: sl2.Mat) -> SubgroupClass:
    _require_char2(F)
    if sl2.det(F, g) != 1:
        raise LensError("classify expects a determinant-one matrix")
    if g == sl2.identity():
        return SubgroupClass("Id")
    tr = sl2.trace(F, g)
    two = F.add(1, 1)
    if tr == two:
        return SubgroupClass("UType")
    q = F.q
    roots = [x for x in range(1, q) if F.add(F.sub(F.mul(x, x), F.mul(tr, x)), 1) == 0]
    if roots:
        logs = _log_base(F, F.gen.value)
        if len(logs) != q - 1:
            raise LensError("X is not a primitive element for this modulus")
        c = logs[roots[0]]
        return SubgroupClass("TType", min(c, (q - 1 - c) % (q - 1)))
    conjugate_into_K(F, g)
    k0 = k_generator(F)
    x = k0
    for c in range(1, q + 2):
        if sl2.trace(F, x) == tr:
            return SubgroupClass("KType", min(c, q + 1 - c))
        x = sl2.mul(F, x, k0)
    raise AssertionError("no power of the K generator has this trace")


def h3_cyclic_map(m: int, n: int, c: int) -> int:
    """H_3 multiplier of Z/m -> Z/n, 1 -> c: c^2 m / n mod n."""
    if m < 1 or n < 1:
        raise LensError("cyclic orders must be positive")
    if (m * c) % n:
        raise LensError(f"1 -> {c} does not define a homomorphism Z/{m} -> Z/{n}")
    return (c * ((c * m) // n)) % n


def lens_class(data: LensData) -> int:
    return data.n % data.m


@dataclass(frozen=True)
class LensSums:
    dwT: GroupRingSum
    dwK: GroupRingSum
    countU: int
    countId: int
    dwFull: GroupRingSum
    n_reps: int
    n_T: int
    n_K: int

    def normalized(self, q: int) -> tuple[GroupRingSum, GroupRingSum]:
        return self.dwT.normalize(q * (q + 1)), self.dwK.normalize((q - 1) * q)


def partial_sums(D: LinkDiagram, lens: LensData, F: FiniteField, *, workers: int = 1,
                 check_orders: bool = True) -> LensSums:
    _require_char2(F)
    q = F.q
    if q < 16:
        raise LensError("the decomposition needs q >= 16")
    if D.bridges is None:
        raise LensError("diagram has no designated bridge arcs")
    det = determinant(D)
    if det != lens.m:
        raise LensError(f"determinant {det} does not match lens order {lens.m}")
    Q = Quandle(F, 1)
    cols = enumerate_colorings(D, Q, workers=workers)
    G = branch_generators(D, Q, cols)
    uniq, inverse = np.unique(G, axis=0, return_inverse=True)
    inverse = inverse.reshape(-1)
    counts = np.bincount(inverse, minlength=len(uniq))
    ell = lens_class(lens)
    Tterms: dict[int, int] = {}
    Kterms: dict[int, int] = {}
    nU = nId = nT = nK = 0
    for row, cnt in zip(uniq, counts):
        g = tuple(int(v) for v in row)
        cls = classify(F, g)
        if check_orders and lens.m % sl2.order(F, g):
            raise AssertionError(f"order of {g} does not divide {lens.m}")
        cnt = int(cnt)
        if cls.tag == "Id":
            nId += cnt
        elif cls.tag == "UType":
            nU += cnt
        elif cls.tag == "TType":
            nT += cnt
            e = (ell * h3_cyclic_map(lens.m, q - 1, cls.c)) % (q - 1)
            Tterms[e] = Tterms.get(e, 0) + cnt
        else:
            nK += cnt
            e = (ell * h3_cyclic_map(lens.m, q + 1, cls.c)) % (q + 1)
            Kterms[e] = Kterms.get(e, 0) + cnt
    if nId + nU + nT + nK != cols.shape[0]:
        raise AssertionError("classes do not partition the representations")
    dwT = GroupRingSum.build(q - 1, Tterms, "t")
    dwK = GroupRingSum.build(q + 1, Kterms, "s")
    # H_3(SL_2) = Z/(q^2 - 1) with t -> u^(q+1), s -> u^(q-1)
    full = [(e * (q + 1), c) for e, c in dwT.coeffs] + [(e * (q - 1), c) for e, c in dwK.coeffs]
    full.append((0, nU + nId))
    dwFull = GroupRingSum.build(q * q - 1, full, "u")
    return LensSums(dwT, dwK, nU, nId, dwFull, int(cols.shape[0]), nT, nK)


def _closed_form(m: int, N: int, ell: int, gen: str) -> GroupRingSum:
    terms: dict[int, int] = {}
    for c in range(1, N):
        if (m * c) % N == 0:
            e = (ell * h3_cyclic_map(m, N, c)) % N
            terms[e] = terms.get(e, 0) + 1
    if any(v % 2 for v in terms.values()):
        raise AssertionError("closed form coefficients are not even")
    return GroupRingSum.build(N, {e: v // 2 for e, v in terms.items()}, gen)


def closed_form_T(lens: LensData, q: int) -> GroupRingSum:
    """Half the sum of t^(n c^2 m/(q-1)) over nonzero homomorphisms Z/m -> Z/(q-1)."""
    return _closed_form(lens.m, q - 1, lens_class(lens), "t")


def closed_form_K(lens: LensData, q: int) -> GroupRingSum:
    return _closed_form(lens.m, q + 1, lens_class(lens), "s")


def fraction_lens(cf) -> LensData:
    """Double branched cover L(p, q) of the 4-plat with continued fraction [a1, ..., an].

    p/q = a1 + 1/(a2 + 1/(... + 1/an)) in the braid convention of
    ``two_bridge_diagram``.
    """
    cf = [int(a) for a in cf]
    if not cf or any(a == 0 for a in cf):
        raise LensError("continued fraction entries must be nonzero")
    num, den = cf[-1], 1
    for a in reversed(cf[:-1]):
        num, den = a * num + den, num
    if den < 0:
        num, den = -num, -den
    p = abs(num)
    return LensData(p, den % p if p > 1 else 0)


FAMILY_FRACTIONS = {
    "torus": lambda m: [2 * m],
    "twist": lambda m: [2 * m, 1, 1],
}


def family_lens(family: str, m: int) -> LensData:
    """L(2m, 1) for T(2, 2m) and L(4m + 1, 2) for the twist knot K_m."""
    if family not in FAMILY_FRACTIONS:
        raise LensError(f"unknown family {family!r}")
    return fraction_lens(FAMILY_FRACTIONS[family](m))


def family_diagram(family: str, m: int) -> LinkDiagram:
    if family == "torus":
        return torus_link_diagram(m)
    if family == "twist":
        return twist_knot_diagram(m)
    raise LensError(f"unknown family {family!r}")
