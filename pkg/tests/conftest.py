from __future__ import annotations

import csv
import itertools
from pathlib import Path

import pytest

from paradw.diagram import DiagramError, bundled_knots, parse_pd
from paradw.galois import field_create

DATA = Path(__file__).parent / "data"

F16_MODULUS = (1, 1, 0, 0, 1)   # 1 + X + X^4


@pytest.fixture(scope="session")
def knots():
    return bundled_knots()


@pytest.fixture(scope="session")
def F7():
    return field_create(7)


@pytest.fixture(scope="session")
def F13():
    return field_create(13)


@pytest.fixture(scope="session")
def F16():
    return field_create(2, 4, F16_MODULUS)


def read_csv(name: str) -> list[dict[str, str]]:
    with open(DATA / name, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


# -- diagram surgery for Reidemeister checks ----------------------------------

def _fresh(pd, k=1):
    top = max(max(t) for t in pd)
    return [top + i + 1 for i in range(k)]


def add_kink(pd, edge: int, sign: int):
    """Insert a Reidemeister-I kink of the given sign on ``edge``."""
    pd = [tuple(t) for t in pd]
    n, loop = _fresh(pd, 2)
    kink = (edge, n, loop, loop) if sign > 0 else (edge, loop, loop, n)
    for k, t in enumerate(pd):
        for s in range(4):
            if t[s] != edge:
                continue
            cand = [list(u) for u in pd]
            cand[k][s] = n
            cand = [tuple(u) for u in cand] + [kink]
            try:
                D = parse_pd(cand)
            except DiagramError:
                continue
            if D.crossings[-1].sign == sign:
                return cand
    raise AssertionError(f"could not insert a kink on edge {edge}")


def add_r2(pd, e: int, f: int):
    """Push the strand of edge ``f`` over the strand of edge ``e`` (Reidemeister II)."""
    pd = [tuple(t) for t in pd]
    a, b, c, d = _fresh(pd, 4)
    for ke, se, kf, sf in itertools.product(range(len(pd)), range(4), range(len(pd)), range(4)):
        if pd[ke][se] != e or pd[kf][sf] != f or (ke, se) == (kf, sf):
            continue
        base = [list(u) for u in pd]
        base[ke][se] = b          # e -> P -> a -> Q -> b
        base[kf][sf] = d          # f -> ... -> c -> ... -> d
        for f_first_at_P, sp, sq in itertools.product((True, False), (0, 1), (0, 1)):
            fin_p, fout_p = (f, c) if f_first_at_P else (c, d)
            fin_q, fout_q = (c, d) if f_first_at_P else (f, c)
            P = (e, fout_p, a, fin_p) if sp else (e, fin_p, a, fout_p)
            Q = (a, fout_q, b, fin_q) if sq else (a, fin_q, b, fout_q)
            cand = [tuple(u) for u in base] + [P, Q]
            try:
                D = parse_pd(cand)
            except DiagramError:
                continue
            if D.crossings[-1].sign == D.crossings[-2].sign:
                continue
            faces = [set(_face_edges(D, fc)) for fc in range(D.n_faces)]
            if {a, c} in faces:
                return cand
    raise AssertionError(f"could not perform a Reidemeister II move on edges {e}, {f}")


def _face_edges(D, face):
    return [e for e in D.edge_arc if D.edge_left_face[e] == face or D.edge_right_face[e] == face]


# -- acceptance report --------------------------------------------------------

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
