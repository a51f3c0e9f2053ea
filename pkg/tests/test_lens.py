import itertools
from dataclasses import replace
from functools import lru_cache

import numpy as np
import pytest

from paradw import sl2
from paradw.colorings import enumerate_colorings
from paradw.diagram import torus_link_diagram
from paradw.galois import field_create
from paradw.lens import (
    LensData, LensError, SubgroupClass, branch_generator, branch_generators, classify, closed_form_K,
    closed_form_T, conjugate_into_K, family_diagram, family_lens, fraction_lens, h3_cyclic_map,
    k_generator, lens_class, partial_sums, torus_generator,
)
from paradw.quandle import Quandle, rep_from_coloring
from conftest import F16_MODULUS


@pytest.fixture(scope="module")
def F():
    return field_create(2, 4, F16_MODULUS)


@lru_cache(maxsize=None)
def sums(family, m):
    return partial_sums(family_diagram(family, m), family_lens(family, m),
                        field_create(2, 4, F16_MODULUS))


# -- H_3 of cyclic groups via periodic resolutions ---------------------------

def ring_mul(x, y, n):
    out = [0] * n
    for i, a in enumerate(x):
        if a:
            for j, b in enumerate(y):
                out[(i + j) % n] += a * b
    return out


def power_sum(c, n):
    """1 + h + ... + h^(c-1) in Z[Z/n]."""
    out = [0] * n
    for i in range(c):
        out[i % n] += 1
    return out


def divide_by_h_minus_1(r, n):
    """a with a (h - 1) = r."""
    assert sum(r) == 0
    a = [0] * n
    for j in range(1, n):
        a[j] = a[j - 1] - r[j]
    assert ring_mul(a, [-1, 1] + [0] * (n - 2), n) == r
    return a


def divide_by_norm(r, n):
    """a with a N = r; r must be constant."""
    assert len(set(r)) == 1
    return [r[0]] + [0] * (n - 1)


def h3_oracle(m, n, c):
    """Lift 1 -> c to the 2-periodic resolutions up to degree 3 and read eps(f_3) mod n."""
    if n == 1:
        return 0
    def phi(x):                       # Z[Z/m] -> Z[Z/n], g -> h^c
        out = [0] * n
        for i, a in enumerate(x):
            out[(i * c) % n] += a
        return out
    gm1 = [-1, 1] + [0] * (m - 2) if m > 1 else [0]
    norm_m = [1] * m
    f0 = [1] + [0] * (n - 1)
    f1 = divide_by_h_minus_1(ring_mul(phi(gm1), f0, n), n)
    f2 = divide_by_norm(ring_mul(phi(norm_m), f1, n), n)
    f3 = divide_by_h_minus_1(ring_mul(phi(gm1), f2, n), n)
    assert ring_mul(f2, [1] * n, n) == ring_mul(phi(norm_m), f1, n)
    return sum(f3) % n


def valid_triples(limit=12):
    for m in range(1, limit + 1):
        for n in range(1, limit + 1):
            for c in range(n):
                if (m * c) % n == 0:
                    yield m, n, c


def test_h3_matches_chain_map_oracle():
    count = 0
    for m, n, c in valid_triples():
        assert h3_cyclic_map(m, n, c) == h3_oracle(m, n, c), (m, n, c)
        count += 1
    assert count == 288


def test_h3_examples_and_errors():
    assert h3_cyclic_map(7, 7, 1) == 1
    assert h3_cyclic_map(5, 5, 2) == 4
    assert h3_cyclic_map(3, 15, 5) == 5
    with pytest.raises(LensError):
        h3_cyclic_map(4, 6, 1)
    with pytest.raises(LensError):
        h3_cyclic_map(0, 3, 0)


def test_h3_functoriality():
    for m, n, k in itertools.product(range(1, 13), repeat=3):
        for c in range(n):
            if (m * c) % n:
                continue
            for d in range(k):
                if (n * d) % k:
                    continue
                assert (h3_cyclic_map(n, k, d) * h3_cyclic_map(m, n, c)) % k == h3_cyclic_map(m, k, (c * d) % k)


# -- lens data --------------------------------------------------------------

def test_lens_class_examples():
    assert lens_class(LensData(10, 1)) == 1
    assert lens_class(LensData(5, 2)) == 2
    assert lens_class(LensData(17, 8)) == 8
    with pytest.raises(LensError):
        LensData(6, 3)


def test_fraction_lens():
    assert fraction_lens([3]) == LensData(3, 1)
    assert fraction_lens([2, 1, 1]) == LensData(5, 2)
    assert fraction_lens([3, 1, 2]) == LensData(11, 3)
    for m in range(1, 51):
        assert family_lens("torus", m) == LensData(2 * m, 1)
        assert family_lens("twist", m) == LensData(4 * m + 1, 2)
    with pytest.raises(LensError):
        family_lens("pretzel", 1)


# -- classification -----------------------------------------------------------

def test_classify_examples(F):
    assert classify(F, sl2.identity()).tag == "Id"
    assert classify(F, (1, 1, 0, 1)).tag == "UType"
    assert classify(F, k_generator(F)) == SubgroupClass("KType", 1)
    assert classify(F, torus_generator(F)).tag == "TType"
    assert classify(F, torus_generator(F)).c == 1
    with pytest.raises(LensError):
        classify(F, (1, 1, 1, 1))
    with pytest.raises(LensError):
        classify(field_create(7), sl2.identity())


def test_classes_of_every_sl2_element(F):
    """Sizes of the four classes in SL_2(F_16), and c on cyclic powers."""
    q = F.q
    tags = {"Id": 0, "UType": 0, "TType": 0, "KType": 0}
    for a, b, c in itertools.product(range(q), repeat=3):
        if a == 0:
            continue
        d = F.div(F.add(1, F.mul(b, c)), a)
        tags[classify(F, (a, b, c, d)).tag] += 1
    for b, c in itertools.product(range(q), repeat=2):
        if F.mul(b, c) == 1:            # a = 0 forces bc = 1
            for d in range(q):
                tags[classify(F, (0, b, c, d)).tag] += 1
    assert tags == {"Id": 1, "UType": q * q - 1,
                    "TType": (q - 2) // 2 * q * (q + 1), "KType": q // 2 * (q - 1) * q}
    T, K = torus_generator(F), k_generator(F)
    for k in range(1, q - 1):
        assert classify(F, sl2.power(F, T, k)).c == min(k, q - 1 - k)
    for k in range(1, q + 1):
        assert classify(F, sl2.power(F, K, k)).c == min(k, q + 1 - k)


def test_conjugate_into_K(F):
    K = k_generator(F)
    for k in range(1, F.q + 1):
        g = sl2.power(F, K, k)
        h = conjugate_into_K(F, g)
        target = (0, F.neg(1), 1, sl2.trace(F, g))
        assert sl2.det(F, h) == 1
        assert sl2.mul(F, sl2.mul(F, h, g), sl2.inv(F, h)) == target
        # and a conjugate with c = 0 exercises the other branch
        u = (1, 1, 0, 1)
        g2 = sl2.mul(F, sl2.mul(F, sl2.inv(F, u), g), u)
        conjugate_into_K(F, g2)
    target = (0, 1, 1, F.gen.value)
    assert sl2.mul(F, sl2.mul(F, conjugate_into_K(F, target), target),
                   sl2.inv(F, conjugate_into_K(F, target))) == target
    with pytest.raises(LensError):
        conjugate_into_K(F, torus_generator(F))


# -- branch generators and partial sums ---------------------------------------

def torus_rep_count(F, m):
    """Pairs of meridians with (AB)^m = (BA)^m: the torus link group relation."""
    Q = Quandle(F, 1)
    M = [tuple(int(v) for v in row) for row in Q.meridians]
    n = 0
    for A, B in itertools.product(M, repeat=2):
        n += sl2.power(F, sl2.mul(F, A, B), m) == sl2.power(F, sl2.mul(F, B, A), m)
    return n


@pytest.mark.parametrize("m", [1, 2, 3])
def test_torus_rep_count_against_group_relation(F, m):
    assert sums("torus", m).n_reps == torus_rep_count(F, m)


def test_torus_6_orders(F):
    D = torus_link_diagram(3)
    Q = Quandle(F, 1)
    cols = enumerate_colorings(D, Q)
    G = branch_generators(D, Q, cols)
    by_tag = {}
    for g in {tuple(int(v) for v in row) for row in G}:
        by_tag.setdefault(classify(F, g).tag, set()).add(sl2.order(F, g))
    assert by_tag == {"Id": {1}, "UType": {2}, "TType": {3}}
    for row in cols[:: len(cols) // 25].tolist():
        rep = rep_from_coloring(D, row, Q)
        g = branch_generator(F, rep, D)
        assert np.array_equal(np.array(g), G[cols.tolist().index(row)])
    mono = next(r for r in cols.tolist() if r[0] == r[1])
    assert branch_generator(F, rep_from_coloring(D, mono, Q), D) == sl2.identity()


def test_table_rows(F):
    S = sums("torus", 3)
    assert S.dwT.normalize(4080) == S.dwT.parse("t^10", 15)
    assert S.dwK.total == 0
    # caption divisor q(q + 1) leaves a factor |T| = 15
    assert S.normalized(16)[0] == S.dwT.parse("15t^10", 15)
    S = sums("twist", 4)
    assert S.dwK.normalize(4080) == S.dwK.parse("s^16+s^15+s^13+s^9+s^8+s^4+s^2+s", 17, "s")
    assert S.dwT.total == 0
    S = sums("twist", 3)
    assert S.dwT.total == S.dwK.total == 0
    assert sums("twist", 1).dwT.normalize(4080) == S.dwT.parse("t^9+t^6", 15)


@pytest.mark.parametrize("family,m", [("torus", m) for m in range(1, 9)] + [("twist", m) for m in range(1, 7)])
def test_partition_and_closed_form(F, family, m):
    S = sums(family, m)
    assert S.countId + S.countU + S.n_T + S.n_K == S.n_reps
    assert S.countId == 255
    L = family_lens(family, m)
    assert S.dwT.divisible_by(4080) and S.dwK.divisible_by(4080)
    assert S.dwT.normalize(4080) == closed_form_T(L, 16)
    assert S.dwK.normalize(4080) == closed_form_K(L, 16)
    assert S.dwT.total == S.n_T and S.dwK.total == S.n_K
    assert S.dwFull.total == S.n_reps
    for e, c in S.dwFull.coeffs:
        assert e % 15 == 0 or e % 17 == 0


def test_weyl_symmetry():
    for m in range(1, 51):
        for N in (15, 17):
            for c in range(1, N):
                if (m * c) % N == 0:
                    assert h3_cyclic_map(m, N, c) == h3_cyclic_map(m, N, N - c)


def test_partial_sums_domain(F):
    D = family_diagram("torus", 2)
    with pytest.raises(LensError):
        partial_sums(D, LensData(4, 1), field_create(2, 3))
    with pytest.raises(LensError):
        partial_sums(D, LensData(4, 1), field_create(7))
    with pytest.raises(LensError):
        partial_sums(D, LensData(5, 1), F)
    with pytest.raises(LensError):
        partial_sums(replace(D, bridges=None), LensData(4, 1), F)


def test_workers_do_not_change_sums(F):
    D, L = family_diagram("twist", 2), family_lens("twist", 2)
    a, b = partial_sums(D, L, F), partial_sums(D, L, F, workers=3)
    assert (a.dwT, a.dwK, a.countU, a.countId) == (b.dwT, b.dwK, b.countU, b.countId)
