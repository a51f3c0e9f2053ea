"""Finite fields F_{p^d} in a polynomial basis.

Elements are stored as integer codes ``sum(c[i] * p**i)`` where ``c`` is the
ascending coefficient vector modulo the defining polynomial.  The integer
code is an implementation detail; the canonical order used for every
"least element" choice is lexicographic on the coefficient vector
``(c[0], c[1], ..., c[d-1])``.

Multiplication goes through exp/log tables built from a primitive element,
so every field operation is O(1) and the ``*_arr`` variants vectorize over
numpy integer arrays.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property, total_ordering
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "FieldError",
    "FiniteField",
    "FieldElem",
    "field_create",
    "parse_modulus",
    "format_modulus",
    "ff_arith",
    "ff_sqrt",
    "ff_is_square",
    "ff_nonsquare",
]

MAX_ORDER = 2 ** 16


class FieldError(ValueError):
    """Invalid field description or an undefined field operation."""


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def _prime_factors(n: int) -> list[int]:
    out, i = [], 2
    while i * i <= n:
        if n % i == 0:
            out.append(i)
            while n % i == 0:
                n //= i
        i += 1
    if n > 1:
        out.append(n)
    return out


# -- polynomials over F_p as ascending coefficient lists ---------------------

def _ptrim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pmod(a: list[int], m: list[int], p: int) -> list[int]:
    a = _ptrim([x % p for x in a])
    inv_lead = pow(m[-1], p - 2, p)
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        coef = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - coef * mi) % p
        _ptrim(a)
    return a


def _pmulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pmod(out, m, p)


def _ppowmod(a: list[int], e: int, m: list[int], p: int) -> list[int]:
    result, base = [1], _pmod(list(a), m, p)
    while e:
        if e & 1:
            result = _pmulmod(result, base, m, p)
        base = _pmulmod(base, base, m, p)
        e >>= 1
    return result


def _pgcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _ptrim(list(a)), _ptrim(list(b))
    while b:
        a, b = b, _pmod(a, b, p)
    return a


def _is_irreducible(m: Sequence[int], p: int) -> bool:
    """Rabin's irreducibility test for a monic polynomial over F_p."""
    m = list(m)
    d = len(m) - 1
    if d == 1:
        return True
    x = [0, 1]
    # x^(p^d) == x (mod m)
    xp = x
    for _ in range(d):
        xp = _ppowmod(xp, p, m, p)
    if _ptrim(list(xp)) != x:
        return False
    for r in _prime_factors(d):
        xp = x
        for _ in range(d // r):
            xp = _ppowmod(xp, p, m, p)
        diff = list(xp) + [0] * max(0, 2 - len(xp))
        diff[1] = (diff[1] - 1) % p
        if len(_pgcd(m, diff, p)) != 1:
            return False
    return True


def parse_modulus(text: str) -> tuple[int, ...]:
    """Parse ``"1,1,0,0,1"`` (ascending coefficients) into a tuple."""
    try:
        return tuple(int(tok) for tok in text.replace(" ", "").split(",") if tok != "")
    except ValueError as exc:
        raise FieldError(f"malformed modulus {text!r}") from exc


def format_modulus(modulus: Sequence[int]) -> str:
    return ",".join(str(c) for c in modulus)


@dataclass(frozen=True)
class FiniteField:
    """The field F_q, q = p**d, as F_p[X]/(modulus).

    Build instances with :func:`field_create`, which validates the input.
    """

    p: int
    d: int
    modulus: tuple[int, ...]
    q: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p ** self.d)

    def __repr__(self) -> str:
        if self.d == 1:
            return f"FiniteField(F_{self.p})"
        return f"FiniteField(F_{self.q}, modulus={format_modulus(self.modulus)})"

    # -- coefficient codes ----------------------------------------------

    def coeffs(self, a: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.d):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def from_coeffs(self, coeffs: Iterable[int]) -> int:
        coeffs = list(coeffs)
        if len(coeffs) > self.d:
            # reduce higher-degree input by the modulus
            coeffs = _pmod(coeffs, list(self.modulus), self.p)
        code = 0
        for c in reversed(coeffs):
            code = code * self.p + (c % self.p)
        return code

    def _pow_table(self) -> list[int]:
        return [self.p ** i for i in range(self.d)]

    @cached_property
    def _tables(self) -> tuple[np.ndarray, np.ndarray, int]:
        q, p, m = self.q, self.p, list(self.modulus)
        order = q - 1

        def mul_slow(a: int, b: int) -> int:
            if self.d == 1:
                return a * b % p
            return self.from_coeffs(_pmulmod(list(self.coeffs(a)), list(self.coeffs(b)), m, p))

        targets = [order // r for r in _prime_factors(order)] if order > 1 else []
        for g in self.sorted_codes():
            if g == 0:
                continue
            if all(self._slow_pow(g, e, mul_slow) != 1 for e in targets):
                break
        exp = np.zeros(2 * order, dtype=np.int64)
        log = np.full(q, -1, dtype=np.int64)
        x = 1
        for i in range(order):
            exp[i] = x
            log[x] = i
            x = mul_slow(x, g)
        exp[order:] = exp[:order]
        return exp, log, g

    @staticmethod
    def _slow_pow(a: int, e: int, mul) -> int:
        r = 1
        while e:
            if e & 1:
                r = mul(r, a)
            a = mul(a, a)
            e >>= 1
        return r

    def sorted_codes(self) -> list[int]:
        """All codes sorted by the canonical (lexicographic coefficient) order."""
        return sorted(range(self.q), key=self.coeffs)

    @cached_property
    def rank(self) -> np.ndarray:
        """``rank[a]`` is the position of ``a`` in the canonical order."""
        r = np.empty(self.q, dtype=np.int64)
        r[np.asarray(self.sorted_codes(), dtype=np.int64)] = np.arange(self.q)
        return r

    @property
    def primitive(self) -> int:
        return self._tables[2]

    @property
    def exp_table(self) -> np.ndarray:
        return self._tables[0]

    @property
    def log_table(self) -> np.ndarray:
        return self._tables[1]

    @cached_property
    def _add_table(self) -> np.ndarray | None:
        if self.d == 1 or self.p == 2 or self.q > 4096:
            return None
        a = np.arange(self.q)
        return self._digit_add(a[:, None], a[None, :], 1)

    @cached_property
    def _neg_table(self) -> np.ndarray:
        a = np.arange(self.q)
        if self.p == 2:
            return a
        if self.d == 1:
            return (-a) % self.p
        out = np.zeros_like(a)
        for w in self._pow_table():
            out += ((-(a // w)) % self.p) * w
        return out

    def _digit_add(self, a, b, sign):
        out = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pow_table():
            out += (((a // w) % self.p + sign * ((b // w) % self.p)) % self.p) * w
        return out

    # -- scalar operations on codes -----------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return int(self._digit_add(np.int64(a), np.int64(b), 1))

    def neg(self, a: int) -> int:
        return int(self._neg_table[a])

    def sub(self, a: int, b: int) -> int:
        if self.d == 1:
            return (a - b) % self.p
        if self.p == 2:
            return a ^ b
        return int(self._digit_add(np.int64(a), np.int64(b), -1))

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        lg = self.log_table
        return int(self.exp_table[lg[a] + lg[b]])

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in a finite field")
        lg = self.log_table[a]
        return int(self.exp_table[(self.q - 1 - lg) % (self.q - 1)])

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        """Square-and-multiply; negative exponents invert first."""
        if k < 0:
            a, k = self.inv(a), -k
        result = 1
        while k:
            if k & 1:
                result = self.mul(result, a)
            a = self.mul(a, a)
            k >>= 1
        return result

    def log(self, a: int) -> int:
        """Discrete log base :attr:`primitive`."""
        if a == 0:
            raise ZeroDivisionError("log of zero")
        return int(self.log_table[a])

    def is_square(self, a: int) -> bool:
        if self.p == 2:
            raise FieldError("quadratic-residue test is for odd characteristic")
        return a == 0 or self.pow(a, (self.q - 1) // 2) == 1

    def sqrt(self, a: int) -> int:
        """Inverse Frobenius a -> a^(q/2); characteristic 2 only."""
        if self.p != 2:
            raise FieldError("sqrt via inverse Frobenius needs characteristic 2")
        return self.pow(a, self.q // 2)

    def nonsquare(self) -> int:
        if self.p == 2:
            raise FieldError("every element of a characteristic-2 field is a square")
        for a in self.sorted_codes():
            if not self.is_square(a):
                return a
        raise AssertionError("odd field without non-squares")

    # -- vectorized operations on code arrays --------------------------------

    def add_arr(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        if self.d == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        if self._add_table is not None:
            return self._add_table[a, b]
        return self._digit_add(a, b, 1)

    def neg_arr(self, a):
        return self._neg_table[np.asarray(a, dtype=np.int64)]

    def sub_arr(self, a, b):
        return self.add_arr(a, self.neg_arr(b))

    def mul_arr(self, a, b):
        a, b = np.asarray(a, dtype=np.int64), np.asarray(b, dtype=np.int64)
        lg = self.log_table
        out = self.exp_table[np.maximum(lg[a], 0) + np.maximum(lg[b], 0)]
        return np.where((a == 0) | (b == 0), 0, out)

    def inv_arr(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in a finite field")
        return self.exp_table[(self.q - 1 - self.log_table[a]) % (self.q - 1)]

    # -- element wrappers ---------------------------------------------------

    def __call__(self, value: int | Sequence[int]) -> "FieldElem":
        if isinstance(value, (int, np.integer)):
            if self.d == 1:
                return FieldElem(self, int(value) % self.p)
            if not 0 <= value < self.q:
                raise FieldError(f"code {value} outside [0, {self.q})")
            return FieldElem(self, int(value))
        return FieldElem(self, self.from_coeffs(value))

    @property
    def zero(self) -> "FieldElem":
        return FieldElem(self, 0)

    @property
    def one(self) -> "FieldElem":
        return FieldElem(self, 1)

    @property
    def gen(self) -> "FieldElem":
        """The class of X (equal to 0 for prime fields with modulus t)."""
        return self([0, 1])

    def elements(self) -> list["FieldElem"]:
        return [FieldElem(self, a) for a in self.sorted_codes()]


@total_ordering
@dataclass(frozen=True)
class FieldElem:
    field: FiniteField
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.coeffs(self.value)

    def _other(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.field != self.field:
                raise FieldError("operands live in different fields")
            return other.value
        return self.field(int(other)).value

    def __add__(self, other):
        return FieldElem(self.field, self.field.add(self.value, self._other(other)))

    __radd__ = __add__

    def __sub__(self, other):
        return FieldElem(self.field, self.field.sub(self.value, self._other(other)))

    def __rsub__(self, other):
        return FieldElem(self.field, self.field.sub(self._other(other), self.value))

    def __mul__(self, other):
        return FieldElem(self.field, self.field.mul(self.value, self._other(other)))

    __rmul__ = __mul__

    def __truediv__(self, other):
        return FieldElem(self.field, self.field.div(self.value, self._other(other)))

    def __rtruediv__(self, other):
        return FieldElem(self.field, self.field.div(self._other(other), self.value))

    def __neg__(self):
        return FieldElem(self.field, self.field.neg(self.value))

    def __pow__(self, k: int):
        return FieldElem(self.field, self.field.pow(self.value, k))

    def inverse(self) -> "FieldElem":
        return FieldElem(self.field, self.field.inv(self.value))

    def sqrt(self) -> "FieldElem":
        return FieldElem(self.field, self.field.sqrt(self.value))

    def is_square(self) -> bool:
        return self.field.is_square(self.value)

    def __bool__(self) -> bool:
        return self.value != 0

    def __lt__(self, other: "FieldElem") -> bool:
        return self.coeffs < other.coeffs

    def __repr__(self) -> str:
        if self.field.d == 1:
            return f"{self.value}"
        terms = []
        for i, c in enumerate(self.coeffs):
            if not c:
                continue
            if i == 0:
                terms.append(str(c))
            else:
                mono = "X" if i == 1 else f"X^{i}"
                terms.append(mono if c == 1 else f"{c}{mono}")
        return "+".join(terms) if terms else "0"


def field_create(p: int, d: int = 1, modulus: Sequence[int] | None = None) -> FiniteField:
    """Validate and build F_{p^d}.

    Without an explicit modulus the prime field uses ``t`` (so X = 0) and
    extension fields use the lexicographically least monic irreducible of
    degree ``d``.
    """
    if not isinstance(p, (int, np.integer)) or not _is_prime(int(p)):
        raise FieldError(f"characteristic {p} is not prime")
    if d < 1:
        raise FieldError("degree must be positive")
    if p ** d > MAX_ORDER:
        raise FieldError(f"field order {p}^{d} exceeds {MAX_ORDER}")
    if modulus is None:
        if d == 1:
            modulus = (0, 1)
        else:
            modulus = _least_irreducible(int(p), int(d))
    modulus = tuple(int(c) for c in modulus)
    if len(modulus) != d + 1:
        raise FieldError(f"modulus {modulus} does not have degree {d}")
    if any(not 0 <= c < p for c in modulus):
        raise FieldError("modulus coefficients must lie in [0, p)")
    if modulus[-1] != 1:
        raise FieldError("modulus must be monic")
    if not _is_irreducible(modulus, int(p)):
        raise FieldError(f"modulus {format_modulus(modulus)} is reducible over F_{p}")
    return FiniteField(int(p), int(d), modulus)


def _least_irreducible(p: int, d: int) -> tuple[int, ...]:
    import itertools

    for low in itertools.product(range(p), repeat=d):
        cand = tuple(low) + (1,)
        if cand[0] != 0 and _is_irreducible(cand, p):
            return cand
    raise AssertionError("no irreducible polynomial found")


def ff_arith(a: FieldElem, b: FieldElem | None, op: str, k: int | None = None) -> FieldElem:
    """Dispatch one of add, sub, mul, div, neg, inv, pow on field elements."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if op == "pow":
        if k is None:
            raise FieldError("pow needs an exponent")
        return a ** k
    raise FieldError(f"unknown field operation {op!r}")


def ff_sqrt(a: FieldElem) -> FieldElem:
    return a.sqrt()


def ff_is_square(a: FieldElem) -> bool:
    return a.is_square()


def ff_nonsquare(F: FiniteField) -> FieldElem:
    return FieldElem(F, F.nonsquare())
