"""Command-line entry point: ``paradw <command> [options]``.

Commands
  cocycle-table  cocycle invariants of the knots in a PD file, odd generic q
  lens-table     T/K partial sums for torus links or twist knots, q = 2^j
  bloch-info     order and generator of the reduced Bloch group
  colorings      colouring counts over X_1 and X_r0

Exit status: 0 success, 2 configuration error, 3 domain violation,
4 internal consistency failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .bloch import BlochError, prebloch_build
from .cocycle import ConsistencyError, DomainError, check_generic, cocycle_invariant
from .colorings import ColoringError, count_colorings
from .diagram import DiagramError, bundled_knots, read_pd_file
from .galois import FieldError, FiniteField, field_create, parse_modulus
from .groupring import GroupRingError, GroupRingSum
from .lens import LensError, family_diagram, family_lens, partial_sums
from .quandle import Quandle

log = logging.getLogger("paradw")

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN, EXIT_CONSISTENCY = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    field: FiniteField
    knots: str | None = None
    family: str | None = None
    m_range: tuple[int, int] | None = None
    fmt: str = "text"
    normalize: str = "table"
    workers: int = 1
    out: str | None = None


# -- divisors ---------------------------------------------------------------

def cocycle_divisor(q: int, mode: str) -> int:
    """``table``: (q + 1)/2, which reproduces the published columns;
    ``caption``: q(q - 1)/2; ``none``: 1."""
    return {"table": (q + 1) // 2, "caption": q * (q - 1) // 2, "none": 1}[mode]


def lens_divisors(q: int, mode: str) -> tuple[int, int]:
    """Divisors for (dwT, dwK).  ``table`` uses |SL_2(F_q)| for both."""
    if mode == "table":
        return q * (q * q - 1), q * (q * q - 1)
    if mode == "caption":
        return q * (q + 1), (q - 1) * q
    return 1, 1


# -- parsing ----------------------------------------------------------------

def _prime_power(q: int) -> tuple[int, int]:
    if q < 2:
        raise ConfigError(f"q = {q} is not a prime power")
    p = next(k for k in range(2, q + 1) if q % k == 0)
    d, r = 0, q
    while r % p == 0:
        r //= p
        d += 1
    if r != 1:
        raise ConfigError(f"q = {q} is not a prime power")
    return p, d


def parse_m_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            a, b = text.split("..", 1)
            lo, hi = int(a), int(b)
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError(f"bad m range {text!r}; expected A..B") from None
    if lo < 1 or hi < lo:
        raise ConfigError(f"bad m range {text!r}")
    return lo, hi


def _field_from_args(ns) -> FiniteField:
    if ns.q is not None:
        p, d = _prime_power(ns.q)
        if ns.p is not None and ns.p != p:
            raise ConfigError("--p and --q disagree")
        if ns.d is not None and ns.d != d:
            raise ConfigError("--d and --q disagree")
    elif ns.p is not None:
        p, d = ns.p, ns.d or 1
    else:
        raise ConfigError("give the field with --p [--d] or --q")
    modulus = parse_modulus(ns.modulus) if ns.modulus else None
    try:
        return field_create(p, d, modulus)
    except FieldError as exc:
        raise ConfigError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="paradw", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, *, formats=("text", "json", "csv")):
        p.add_argument("--p", type=int)
        p.add_argument("--d", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--modulus", help="coefficients c0,...,cd of the modulus, e.g. 1,1,0,0,1")
        p.add_argument("--format", dest="fmt", choices=formats, default=formats[0])
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--out", help="write output to this file")
        p.add_argument("-v", "--verbose", action="store_true")

    c = sub.add_parser("cocycle-table", help="cocycle invariants of knots (odd generic q)")
    common(c)
    c.add_argument("--knots", help="PD file (default: bundled prime knots up to 7 crossings)")
    c.add_argument("--normalize", choices=("table", "caption", "none"), default="table")

    ln = sub.add_parser("lens-table", help="T/K partial sums for a 2-bridge family (q = 2^j)")
    common(ln, formats=("csv", "json", "text"))
    ln.add_argument("--family", choices=("torus", "twist"), required=True)
    ln.add_argument("--m-range", "--m", dest="m_range", default="1..50")
    ln.add_argument("--normalize", choices=("table", "caption", "none"), default="table")

    b = sub.add_parser("bloch-info", help="reduced Bloch group of F_q")
    common(b, formats=("json",))

    k = sub.add_parser("colorings", help="colouring counts over X_1 and X_r0")
    common(k)
    k.add_argument("--knots", help="PD file (default: bundled prime knots up to 7 crossings)")
    return ap


def config_from_args(ns) -> RunConfig:
    if ns.workers < 1:
        raise ConfigError("--workers must be positive")
    F = _field_from_args(ns)
    return RunConfig(
        command=ns.command,
        field=F,
        knots=getattr(ns, "knots", None),
        family=getattr(ns, "family", None),
        m_range=parse_m_range(ns.m_range) if getattr(ns, "m_range", None) else None,
        fmt=ns.fmt,
        normalize=getattr(ns, "normalize", "table"),
        workers=ns.workers,
        out=ns.out,
    )


# -- commands ---------------------------------------------------------------

def _load_knots(path: str | None):
    if path is None:
        return bundled_knots()
    try:
        return read_pd_file(path)
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None


def _render_rows(header: Sequence[str], rows: list[list], fmt: str, payload) -> str:
    if fmt == "json":
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        return buf.getvalue()
    widths = [max(len(str(r[i])) for r in [list(header)] + rows) for i in range(len(header))]
    lines = ["  ".join(str(v).ljust(w) for v, w in zip(r, widths)).rstrip()
             for r in [list(header)] + rows]
    return "\n".join(lines) + "\n"


def _normalized(x: GroupRingSum, d: int, what: str) -> GroupRingSum:
    if not x.divisible_by(d):
        raise ConsistencyError(f"{what}: coefficients of {x} are not divisible by {d}")
    return x.normalize(d)


def run_cocycle_table(cfg: RunConfig) -> str:
    F = cfg.field
    check_generic(F)
    knots = _load_knots(cfg.knots)
    data = prebloch_build(F, reduced=True)
    d = cocycle_divisor(F.q, cfg.normalize)
    rows, items = [], []
    for name, D in knots.items():
        log.info("cocycle invariant of %s at q = %d", name, F.q)
        res = cocycle_invariant(D, F, data=data, workers=cfg.workers)
        norm = _normalized(res.invariant, d, name)
        rows.append([name, str(norm), json.dumps(res.invariant.to_json_obj()["coeffs"], sort_keys=True)])
        items.append({"knot": name, "normalized": str(norm), "value": norm.to_json_obj(),
                      "raw": res.invariant.to_json_obj(), "colorings": list(res.counts)})
    payload = {"q": F.q, "bloch_order": data.bloch_order, "divisor": d, "knots": items}
    return _render_rows(["knot", "normalized", "raw"], rows, cfg.fmt, payload)


def run_lens_table(cfg: RunConfig) -> str:
    F = cfg.field
    if F.p != 2:
        raise DomainError(f"lens-table needs q = 2^j with j >= 4; got q = {F.q}")
    if F.q < 16:
        raise DomainError(f"lens-table needs q >= 16; got q = {F.q}")
    lo, hi = cfg.m_range or (1, 50)
    dT, dK = lens_divisors(F.q, cfg.normalize)
    rows, items = [], []
    for m in range(lo, hi + 1):
        log.info("%s family, m = %d", cfg.family, m)
        D = family_diagram(cfg.family, m)
        S = partial_sums(D, family_lens(cfg.family, m), F, workers=cfg.workers)
        T = _normalized(S.dwT, dT, f"m={m} dwT")
        K = _normalized(S.dwK, dK, f"m={m} dwK")
        rows.append([m, str(T), str(K)])
        items.append({"m": m, "dwT": T.to_json_obj(), "dwK": K.to_json_obj(),
                      "countU": S.countU, "countId": S.countId, "reps": S.n_reps})
    payload = {"q": F.q, "family": cfg.family, "rows": items}
    return _render_rows(["m", "dwT", "dwK"], rows, cfg.fmt, payload)


def run_bloch_info(cfg: RunConfig) -> str:
    F = cfg.field
    if F.p == 2:
        raise DomainError("bloch-info needs odd q")
    data = prebloch_build(F, reduced=True)
    # symbols keyed by their field element, e.g. {"[3]": 1}
    gen = {f"[{F(x)!r}]": c for x, c in sorted(data.bloch_gen.coeffs.items())}
    payload = {"q": F.q, "reduced_order": data.bloch_order, "generator_class": gen,
               "cyclic_factors": list(data.cyclic_factors)}
    return json.dumps(payload, sort_keys=True) + "\n"


def run_colorings(cfg: RunConfig) -> str:
    F = cfg.field
    knots = _load_knots(cfg.knots)
    quandles = [Quandle(F, 1)]
    if F.p != 2:
        quandles.append(Quandle(F, F.nonsquare()))
    rows, items = [], []
    for name, D in knots.items():
        counts = [count_colorings(D, Q, workers=cfg.workers) for Q in quandles]
        rows.append([name] + counts + [sum(counts)])
        items.append({"knot": name, "counts": counts, "total": sum(counts)})
    header = ["knot", "X_1"] + (["X_r0"] if len(quandles) > 1 else []) + ["total"]
    return _render_rows(header, rows, cfg.fmt, {"q": F.q, "knots": items})


COMMANDS = {
    "cocycle-table": run_cocycle_table,
    "lens-table": run_lens_table,
    "bloch-info": run_bloch_info,
    "colorings": run_colorings,
}


def run(cfg: RunConfig) -> str:
    return COMMANDS[cfg.command](cfg)


def main(argv: Sequence[str] | None = None) -> int:
    ap = build_parser()
    try:
        ns = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if ns.verbose else logging.WARNING,
                        format="%(name)s: %(message)s")
    try:
        cfg = config_from_args(ns)
        text = run(cfg)
    except (ConfigError, DiagramError, FieldError, GroupRingError) as exc:
        print(f"paradw: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (DomainError, LensError, BlochError) as exc:
        print(f"paradw: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ConsistencyError, ColoringError, AssertionError) as exc:
        print(f"paradw: consistency failure: {exc}", file=sys.stderr)
        return EXIT_CONSISTENCY
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
