"""Finitely supported integer sums over a cyclic group <t | t^n>."""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from typing import Iterable, Mapping

__all__ = ["GroupRingSum", "GroupRingError"]


class GroupRingError(ValueError):
    pass


@dataclass(frozen=True)
class GroupRingSum:
    order: int
    coeffs: tuple[tuple[int, int], ...] = ()   # sorted (exponent, coefficient), no zeros
    generator: str = "t"
    divisor: int = field(default=1, compare=False)   # bookkeeping for normalized values

    @classmethod
    def build(cls, order: int, terms: Mapping[int, int] | Iterable[tuple[int, int]],
              generator: str = "t", divisor: int = 1) -> "GroupRingSum":
        if order < 1:
            raise GroupRingError("group order must be positive")
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            e = int(e) % order
            acc[e] = acc.get(e, 0) + int(c)
        return cls(order, tuple(sorted((e, c) for e, c in acc.items() if c)), generator, divisor)

    @classmethod
    def from_exponents(cls, order: int, exponents: Iterable[int], generator: str = "t") -> "GroupRingSum":
        acc: dict[int, int] = {}
        for e in exponents:
            acc[int(e)] = acc.get(int(e), 0) + 1
        return cls.build(order, acc, generator)

    def as_dict(self) -> dict[int, int]:
        return dict(self.coeffs)

    def coeff(self, e: int) -> int:
        return self.as_dict().get(e % self.order, 0)

    @property
    def total(self) -> int:
        return sum(c for _, c in self.coeffs)

    def __add__(self, other: "GroupRingSum") -> "GroupRingSum":
        if self.order != other.order:
            raise GroupRingError("sums over different groups")
        return GroupRingSum.build(self.order, list(self.coeffs) + list(other.coeffs),
                                  self.generator, self.divisor)

    def scale(self, k: int) -> "GroupRingSum":
        return GroupRingSum.build(self.order, [(e, k * c) for e, c in self.coeffs],
                                  self.generator, self.divisor)

    def substitute(self, u: int) -> "GroupRingSum":
        """The image under t -> t^u."""
        return GroupRingSum.build(self.order, [(e * u, c) for e, c in self.coeffs],
                                  self.generator, self.divisor)

    def divisible_by(self, d: int) -> bool:
        return all(c % d == 0 for _, c in self.coeffs)

    def normalize(self, d: int) -> "GroupRingSum":
        """Exact division of every coefficient by d."""
        if not self.divisible_by(d):
            raise GroupRingError(f"coefficients {self.as_dict()} are not divisible by {d}")
        return GroupRingSum(self.order, tuple((e, c // d) for e, c in self.coeffs),
                            self.generator, self.divisor * d)

    def with_generator(self, g: str) -> "GroupRingSum":
        return GroupRingSum(self.order, self.coeffs, g, self.divisor)

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        out = ""
        for e, c in sorted(self.coeffs, reverse=True):
            if e == 0:
                body = str(abs(c))
            else:
                mono = self.generator if e == 1 else f"{self.generator}^{e}"
                body = mono if abs(c) == 1 else f"{abs(c)}{mono}"
            if c < 0:
                out += "-" + body
            else:
                out += ("+" if out else "") + body
        return out

    @classmethod
    def parse(cls, text: str, order: int, generator: str = "t") -> "GroupRingSum":
        """Parse strings such as ``168t+12``, ``t^{12}+2 t^8`` or ``0``."""
        s = text.replace(" ", "").replace("{", "").replace("}", "")
        if s in ("", "0"):
            return cls.build(order, {}, generator)
        g = re.escape(generator)
        term = re.compile(rf"([+-]?)(\d*)({g}(?:\^(\d+))?)?")
        pos, acc = 0, []
        while pos < len(s):
            m = term.match(s, pos)
            if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
                raise GroupRingError(f"cannot parse {text!r}")
            sign = -1 if m.group(1) == "-" else 1
            coef = int(m.group(2)) if m.group(2) else 1
            exp = 0 if not m.group(3) else int(m.group(4) or 1)
            acc.append((exp, sign * coef))
            pos = m.end()
        return cls.build(order, acc, generator)

    # -- json ---------------------------------------------------------------

    def to_json_obj(self) -> dict:
        obj = {"order": self.order, "generator": self.generator,
               "coeffs": {str(e): c for e, c in self.coeffs}}
        if self.divisor != 1:
            obj["divisor"] = self.divisor
        return obj

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj(), sort_keys=True)

    @classmethod
    def from_json_obj(cls, obj: Mapping) -> "GroupRingSum":
        return cls.build(int(obj["order"]), {int(k): int(v) for k, v in obj["coeffs"].items()},
                         obj.get("generator", "t"), int(obj.get("divisor", 1)))

    @classmethod
    def from_json(cls, text: str) -> "GroupRingSum":
        return cls.from_json_obj(json.loads(text))
