"""2x2 matrices over a finite field, as flat tuples ``(a, b, c, d)`` of codes.

``(a, b, c, d)`` is the matrix [[a, b], [c, d]].  The ``*_arr`` helpers take
an array of shape (..., 4) and work row by row.
"""
from __future__ import annotations

import numpy as np

from .galois import FiniteField

Mat = tuple[int, int, int, int]


def identity() -> Mat:
    return (1, 0, 0, 1)


def mul(F: FiniteField, x: Mat, y: Mat) -> Mat:
    a, b, c, d = x
    e, f, g, h = y
    return (F.add(F.mul(a, e), F.mul(b, g)), F.add(F.mul(a, f), F.mul(b, h)),
            F.add(F.mul(c, e), F.mul(d, g)), F.add(F.mul(c, f), F.mul(d, h)))


def det(F: FiniteField, x: Mat) -> int:
    a, b, c, d = x
    return F.sub(F.mul(a, d), F.mul(b, c))


def trace(F: FiniteField, x: Mat) -> int:
    return F.add(x[0], x[3])


def inv(F: FiniteField, x: Mat) -> Mat:
    """Inverse of a determinant-one matrix."""
    a, b, c, d = x
    if det(F, x) != 1:
        raise ValueError("matrix is not in SL2")
    return (d, F.neg(b), F.neg(c), a)


def power(F: FiniteField, x: Mat, k: int) -> Mat:
    if k < 0:
        x, k = inv(F, x), -k
    out = identity()
    while k:
        if k & 1:
            out = mul(F, out, x)
        x = mul(F, x, x)
        k >>= 1
    return out


def order(F: FiniteField, x: Mat) -> int:
    y, k = x, 1
    while y != identity():
        y = mul(F, y, x)
        k += 1
    return k


def act_row(F: FiniteField, v: tuple[int, int], x: Mat) -> tuple[int, int]:
    """Row vector times matrix."""
    a, b, c, d = x
    return (F.add(F.mul(v[0], a), F.mul(v[1], c)), F.add(F.mul(v[0], b), F.mul(v[1], d)))


def mul_arr(F: FiniteField, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    x, y = np.asarray(x), np.asarray(y)
    m, add = F.mul_arr, F.add_arr
    out = np.empty(np.broadcast_shapes(x.shape, y.shape), dtype=np.int64)
    out[..., 0] = add(m(x[..., 0], y[..., 0]), m(x[..., 1], y[..., 2]))
    out[..., 1] = add(m(x[..., 0], y[..., 1]), m(x[..., 1], y[..., 3]))
    out[..., 2] = add(m(x[..., 2], y[..., 0]), m(x[..., 3], y[..., 2]))
    out[..., 3] = add(m(x[..., 2], y[..., 1]), m(x[..., 3], y[..., 3]))
    return out


def inv_arr(F: FiniteField, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    out = np.empty_like(x)
    out[..., 0] = x[..., 3]
    out[..., 1] = F.neg_arr(x[..., 1])
    out[..., 2] = F.neg_arr(x[..., 2])
    out[..., 3] = x[..., 0]
    return out
