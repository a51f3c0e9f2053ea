import itertools
import random
from collections import Counter
from functools import lru_cache

import pytest

from paradw.bloch import BlochElem, prebloch_build
from paradw.cocycle import (
    DomainError, check_generic, cocycle_invariant, cross_ratio_class, pair, pairings, phi2_chain,
    phi3_chain, proj, psi,
)
from paradw.colorings import enumerate_colorings, shadow
from paradw.diagram import determinant, parse_pd, two_bridge_diagram
from paradw.galois import field_create
from paradw.groupring import GroupRingSum
from paradw.quandle import Quandle
from conftest import add_kink, add_r2


@lru_cache(maxsize=None)
def bloch(q, reduced=True):
    return prebloch_build(field_create(q), reduced=reduced)


def multisets(D, q, reduced=True):
    F = field_create(q)
    data = bloch(q, reduced)
    return [Counter(pairings(D, Quandle(F, r), data)[1].tolist()) for r in (1, F.nonsquare())]


# -- orbit canonical form for tuples of X_r elements under SL_2 ----------------

def orbit_key(Q, t):
    """Complete SL_2-invariant of a tuple of +-vectors: pairwise determinants,
    minimized over sign choices; ratios along the line when all are parallel."""
    F = Q.F
    vs = [tuple(int(v) for v in Q.pairs[i]) for i in t]
    det = lambda u, v: F.sub(F.mul(u[0], v[1]), F.mul(u[1], v[0]))
    best = None
    for signs in itertools.product((1, F.neg(1)), repeat=len(vs)):
        w = [(F.mul(s, a), F.mul(s, b)) for s, (a, b) in zip(signs, vs)]
        key = tuple(det(w[i], w[j]) for i in range(len(w)) for j in range(i + 1, len(w)))
        if not any(key):
            k = 0 if w[0][0] else 1
            key = ("line",) + tuple(F.div(x[k], w[0][k]) for x in w)
        if best is None or key < best:
            best = key
    return best


def coinvariant_chain(Q, terms):
    out = Counter()
    for c, t in terms:
        out[orbit_key(Q, t)] += c
    return {k: v for k, v in out.items() if v}


def faces_of(terms):
    return [((-1) ** i * c, t[:i] + t[i + 1:]) for c, t in terms for i in range(len(t))]


def rack_boundary(Q, r, a, b):
    op = Q.op_table
    return [(1, (r, b)), (-1, (int(op[r, a]), b)), (-1, (r, a)), (1, (int(op[r, b]), int(op[a, b])))]


@pytest.mark.parametrize("q,r", [(7, 1), (7, 3), (13, 2)])
def test_phi_is_a_chain_map(q, r):
    Q = Quandle(field_create(q), r)
    rng = random.Random(q + r)
    for _ in range(1000 if q == 7 else 300):
        x, a, b = (rng.randrange(len(Q)) for _ in range(3))
        lhs = coinvariant_chain(Q, faces_of(phi3_chain(Q, x, a, b)))
        rhs = coinvariant_chain(Q, [(s * c, t) for s, (u, v) in rack_boundary(Q, x, a, b)
                                    for c, t in phi2_chain(Q, u, v)])
        assert lhs == rhs


def test_chain_map_check_detects_a_wrong_sign(F7):
    Q = Quandle(F7, 1)
    rng = random.Random(5)
    misses = 0
    for _ in range(200):
        x, a, b = (rng.randrange(len(Q)) for _ in range(3))
        bad = [(-c if k == 2 else c, t) for k, (c, t) in enumerate(phi3_chain(Q, x, a, b))]
        lhs = coinvariant_chain(Q, faces_of(bad))
        rhs = coinvariant_chain(Q, [(s * c, t) for s, (u, v) in rack_boundary(Q, x, a, b)
                                    for c, t in phi2_chain(Q, u, v)])
        misses += lhs != rhs
    assert misses > 100


# -- cross ratios -----------------------------------------------------------

def cross_ratio(F, pts):
    """(x1 - x4)(x2 - x3) / ((x1 - x3)(x2 - x4)); factors with infinity are dropped."""
    inf = F.q
    x1, x2, x3, x4 = pts
    num, den = [], []
    for (a, b), where in (((x1, x4), num), ((x2, x3), num), ((x1, x3), den), ((x2, x4), den)):
        if inf not in (a, b):
            where.append(F.sub(a, b))
    val = 1
    for v in num:
        val = F.mul(val, v)
    for v in den:
        val = F.div(val, v)
    return val


def mobius(F, g, x):
    a, b, c, d = g
    inf = F.q
    if x == inf:
        return F.div(a, c) if c else inf
    den = F.add(F.mul(c, x), d)
    return inf if den == 0 else F.div(F.add(F.mul(a, x), b), den)


def test_cross_ratio_formula(F7):
    pts = range(8)
    for t in itertools.permutations(pts, 4):
        el = cross_ratio_class(F7, *t)
        assert el.coeffs == {cross_ratio(F7, t): 1}
    assert cross_ratio_class(F7, 1, 1, 2, 3).coeffs == {}


@pytest.mark.parametrize("q", [7, 13])
def test_cross_ratio_is_pgl2_invariant(q):
    F = field_create(q)
    rng = random.Random(q)
    for _ in range(300):
        while True:
            g = tuple(rng.randrange(q) for _ in range(4))
            if F.sub(F.mul(g[0], g[3]), F.mul(g[1], g[2])):
                break
        t = rng.sample(range(q + 1), 4)
        assert cross_ratio(F, [mobius(F, g, x) for x in t]) == cross_ratio(F, t)
        assert (cross_ratio_class(F, *[mobius(F, g, x) for x in t]).coeffs
                == cross_ratio_class(F, *t).coeffs)


@pytest.mark.parametrize("q", [7, 13])
def test_phi_vanishes_on_boundaries(q):
    F = field_create(q)
    D = bloch(q)
    rng = random.Random(2 * q)
    for _ in range(1000):
        t = rng.sample(range(q + 1), 5)
        total = BlochElem({})
        for i in range(5):
            total = total + cross_ratio_class(F, *(t[:i] + t[i + 1:])).scale((-1) ** i)
        assert D.is_zero(total)


# -- the cocycle ------------------------------------------------------------

@pytest.mark.parametrize("q", [7, 13])
def test_psi_cocycle_identity(q):
    F = field_create(q)
    D = bloch(q)
    rng = random.Random(q)
    nonzero = 0
    for r in (1, F.nonsquare()):
        Q = Quandle(F, r)
        op = Q.op_table
        o = lambda a, b: int(op[a, b])
        for _ in range(5000):
            x, y, z, w = (rng.randrange(len(Q)) for _ in range(4))
            lhs = psi(Q, x, z, w) - psi(Q, x, y, w) + psi(Q, x, y, z)
            rhs = psi(Q, o(x, y), z, w) - psi(Q, o(x, z), o(y, z), w) + psi(Q, o(x, w), o(y, w), o(z, w))
            assert D.equal(lhs, rhs)
            nonzero += not D.is_zero(psi(Q, x, y, z))
    assert nonzero > 1000


@pytest.mark.parametrize("q", [7, 13])
def test_psi_degenerate_vanishing(q):
    F = field_create(q)
    D = bloch(q)
    for r in (1, F.nonsquare()):
        Q = Quandle(F, r)
        for x, y in itertools.product(range(len(Q)), repeat=2):
            assert D.is_zero(psi(Q, x, y, y))
            assert D.is_zero(psi(Q, x, x, y))


def test_projection_of_p0_is_infinity(F7):
    Q = Quandle(F7, 1)
    assert proj(Q, Q.p0) == 7


def test_vectorized_pairings_match_scalar(knots, F13):
    D = bloch(13)
    Q = Quandle(F13, 2)
    K = knots["7_4"]
    cols = enumerate_colorings(K, Q)
    pick = cols[:: max(1, len(cols) // 60)]
    vec, exps = pairings(K, Q, D, pick)
    for row, v, e in zip(pick.tolist(), vec, exps):
        el = pair(shadow(K, Q, row), D)
        assert D.normal_form(el) == D.normal_form(BlochElem.of((D.gens[i], int(c)) for i, c in enumerate(v) if c))
        assert D.bloch_table[D.normal_form(el)] == e


# -- invariance -------------------------------------------------------------

def test_reidemeister_invariance_6_2(knots):
    """At q = 17 the pairings of 6_2 are nontrivial and detect its mirror image."""
    K = knots["6_2"]
    base = multisets(K, 17)
    assert base[0] == Counter({0: 2592, 2: 2448})
    assert multisets(K.mirror(), 17) != base
    others = [
        two_bridge_diagram([-3, -1, -2]),
        parse_pd(add_kink(K.pd, 1, 1)),
        parse_pd(add_kink(K.pd, 5, -1)),
        parse_pd(add_r2(K.pd, 1, 3)),
    ]
    for E in others:
        assert determinant(E) == 11
        assert multisets(E, 17) == base


def test_reidemeister_invariance_3_1(knots):
    """3_1 pairs trivially into the reduced group, so compare over the unreduced one at q = 11."""
    K = knots["3_1"]
    base = multisets(K, 11, reduced=False)
    assert base[0] == Counter({5: 550, 0: 170})
    assert multisets(K.mirror(), 11, reduced=False) != base
    others = [
        two_bridge_diagram([-3]),
        parse_pd(add_kink(K.pd, 2, 1)),
        parse_pd(add_kink(K.pd, 4, -1)),
        parse_pd(add_r2(K.pd, 1, 3)),
        parse_pd(add_r2(K.pd, 2, 5)),
    ]
    for E in others:
        assert multisets(E, 11, reduced=False) == base
    assert all(c == Counter({0: 192}) for c in multisets(K, 7))


@pytest.mark.parametrize("name,q", [("6_2", 17), ("7_4", 7), ("7_6", 13)])
def test_unbounded_face_independence(knots, name, q):
    K = knots[name]
    base = multisets(K, q)
    for f in range(K.n_faces):
        assert multisets(K.with_unbounded(f), q) == base


def test_nonsquare_choice_independence(knots, F7):
    D = bloch(7)
    for name in ("6_2", "7_4", "7_6"):
        got = [Counter(pairings(knots[name], Quandle(F7, r), D)[1].tolist()) for r in (3, 5, 6)]
        assert got[0] == got[1] == got[2], name


def test_invariant_at_7(knots, F7):
    res = cocycle_invariant(knots["7_4"], F7, data=bloch(7))
    assert res.invariant == GroupRingSum.parse("672t+48", 2)
    assert sum(res.counts) == res.invariant.total
    assert res.per_quandle[0] + res.per_quandle[1] == res.invariant


def test_workers_do_not_change_the_invariant(knots, F13):
    a = cocycle_invariant(knots["6_3"], F13, data=bloch(13))
    b = cocycle_invariant(knots["6_3"], F13, data=bloch(13), workers=2)
    assert a.invariant == b.invariant


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9, 16, 27])
def test_non_generic_fields_are_rejected(q):
    F = {4: field_create(2, 2), 8: field_create(2, 3), 9: field_create(3, 2),
         16: field_create(2, 4), 27: field_create(3, 3)}.get(q) or field_create(q)
    with pytest.raises(DomainError):
        check_generic(F)
