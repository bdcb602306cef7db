"""Command-line front end.

Every command builds a :class:`Report` (a header, rows and a verdict) and
renders it as text, JSON or CSV.  Exit codes: 0 success, 1 a mathematical
check failed, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from dataclasses import dataclass, field as dc_field
from pathlib import Path

from . import classify3 as c3
from .families import FamilyError, FamilyId, expected_count, family_basis, family_ids, make_family
from .idspace import (ALL_KINDS, DEFAULT_MAX_N, HARD_MAX_N, IdentityKind, check_dimension_cap,
                      membership, residual, solve, span_rank)
from .scalars import PrimeField, field_from_spec
from .utalg import Product, is_associative, linear_combination, pushforward

EXIT_OK, EXIT_MISMATCH, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    n: int = 3
    field: str = "Q"
    kind: str = "id"
    format: str = "text"
    seed: int = 0
    max_n: int = DEFAULT_MAX_N
    out: str | None = None

    @classmethod
    def from_args(cls, ns) -> RunConfig:
        return cls(n=ns.n, field=ns.field, kind=ns.kind, format=ns.format, seed=ns.seed,
                   max_n=ns.max_n, out=ns.out)

    def field_obj(self):
        try:
            return field_from_spec(self.field)
        except ValueError as exc:
            raise UsageError(str(exc)) from None

    def kind_obj(self) -> IdentityKind:
        try:
            return IdentityKind.parse(self.kind)
        except ValueError as exc:
            raise UsageError(str(exc)) from None


@dataclass
class Report:
    command: str
    columns: list
    rows: list = dc_field(default_factory=list)
    ok: bool = True
    meta: dict = dc_field(default_factory=dict)
    payload: dict | None = None  # replaces the generic JSON shape when set

    def to_json(self) -> dict:
        if self.payload is not None:
            return self.payload
        return {"command": self.command, "ok": self.ok, **self.meta,
                "rows": [dict(zip(self.columns, r)) for r in self.rows]}

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_json(), indent=2, sort_keys=True) + "\n"
        if fmt == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\r\n")
            w.writerow(self.columns)
            for r in self.rows:
                w.writerow(["" if x is None else x for x in r])
            return buf.getvalue()
        return self._text()

    def _text(self) -> str:
        cells = [[str(c) for c in self.columns]]
        cells += [["-" if x is None else str(x) for x in r] for r in self.rows]
        widths = [max(len(row[i]) for row in cells) for i in range(len(self.columns))]
        lines = []
        for k, v in self.meta.items():
            lines.append(f"{k}: {v}")
        for j, row in enumerate(cells):
            lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
            if j == 0:
                lines.append("  ".join("-" * w for w in widths))
        lines.append(f"{self.command}: {'PASS' if self.ok else 'FAIL'}")
        return "\n".join(lines) + "\n"


def _load_product(path: str) -> Product:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}") from None
    # accept the report written by `family --format json` as well as a bare product
    if isinstance(data, dict) and "n" not in data and isinstance(data.get("product"), dict):
        data = data["product"]
    try:
        return Product.from_json(data)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _cap(n: int, max_n: int) -> None:
    try:
        check_dimension_cap(n, max_n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _triple_str(t) -> str:
    return " ".join(f"e{a[0]}{a[1]}" for a in t)


def cmd_dim(cfg: RunConfig) -> Report:
    F = cfg.field_obj()
    _cap(cfg.max_n, cfg.max_n)
    rep = Report("dim", ["kind", "n", "dimension", "expected", "match"],
                 meta={"field": F.name, "max_n": cfg.max_n})
    for kind in ALL_KINDS:
        for n in range(3, cfg.max_n + 1):
            d = solve(kind, n, F, cfg.max_n).dimension
            if kind is IdentityKind.COMPATIBLE:
                rep.rows.append([kind.label, n, d, None, "n/a"])
                continue
            want = expected_count(kind, n)
            good = d == want
            rep.ok &= good
            rep.rows.append([kind.label, n, d, want, "yes" if good else "NO"])
    return rep


def cmd_verify(cfg: RunConfig) -> Report:
    F = cfg.field_obj()
    kind = cfg.kind_obj()
    if kind is IdentityKind.COMPATIBLE:
        raise UsageError("no product families are known for the Compatible identity")
    _cap(cfg.n, cfg.max_n)
    n = cfg.n
    ids = family_ids(kind, n)
    fams = family_basis(kind, n, F)
    B = solve(kind, n, F, cfg.max_n)
    want = expected_count(kind, n)
    failing = [str(i) for i, P in zip(ids, fams) if not residual(kind, P).holds]
    r = span_rank(fams, F)
    outside = [str(i) for i, P in zip(ids, fams) if membership(P, B) is None]
    joint = span_rank(fams + list(B.basis), F)
    rng = random.Random(cfg.seed)
    bad_combo = 0
    trials = 20
    for _ in range(trials):
        coeffs = [F.random(rng) for _ in fams]
        P = linear_combination(n, F, coeffs, fams)
        if not residual(kind, P).holds:
            bad_combo += 1
        elif kind is IdentityKind.TOTALLY_COMPATIBLE and not is_associative(P).associative:
            bad_combo += 1
    checks = [
        ("families", len(fams), want, len(fams) == want),
        ("families with zero residual", len(fams) - len(failing), len(fams), not failing),
        ("rank of families", r, len(fams), r == len(fams)),
        ("families inside kernel", len(fams) - len(outside), len(fams), not outside),
        ("kernel dimension", B.dimension, want, B.dimension == want),
        ("rank of families + kernel", joint, r, joint == r),
        ("random combinations passing", trials - bad_combo, trials, bad_combo == 0),
    ]
    rep = Report("verify", ["check", "computed", "expected", "ok"],
                 meta={"kind": kind.label, "n": n, "field": F.name, "seed": cfg.seed})
    for name, got, exp, good in checks:
        rep.rows.append([name, got, exp, "yes" if good else "NO"])
        rep.ok &= good
    if failing:
        rep.meta["residual_failures"] = ", ".join(failing[:10])
    if outside:
        rep.meta["outside_kernel"] = ", ".join(outside[:10])
    return rep


def cmd_check(cfg: RunConfig, path: str) -> Report:
    P = _load_product(path)
    rep = Report("check", ["identity", "holds", "violations", "first_triple", "equation"],
                 meta={"n": P.n, "field": P.field.name})
    for kind in ALL_KINDS:
        res = residual(kind, P)
        first = res.entries[0] if res.entries else None
        rep.rows.append([kind.label, "yes" if res.holds else "no", len(res.entries),
                         _triple_str(first.triple) if first else None,
                         first.equation if first else None])
    assoc = is_associative(P)
    rep.rows.append(["Associative", "yes" if assoc.associative else "no",
                     0 if assoc.associative else None,
                     None if assoc.associative else _triple_str(assoc.triple), None])
    return rep


def cmd_kernel(cfg: RunConfig) -> Report:
    F = cfg.field_obj()
    kind = cfg.kind_obj()
    _cap(cfg.n, cfg.max_n)
    B = solve(kind, cfg.n, F, cfg.max_n)
    rep = Report("kernel", ["index", "pivot", "entries"],
                 meta={"kind": kind.label, "n": cfg.n, "field": F.name,
                       "dimension": B.dimension})
    for k, (p, P) in enumerate(zip(B.pivots, B.basis)):
        rep.rows.append([k, p, json.dumps(P.to_json()["entries"], sort_keys=True)])
    rep.payload = B.to_json()
    return rep


def cmd_family(cfg: RunConfig, name: str) -> Report:
    F = cfg.field_obj()
    try:
        fid = FamilyId.parse(name)
        P = make_family(fid, cfg.n, F)
    except FamilyError as exc:
        raise UsageError(str(exc)) from None
    res = residual(fid.kind, P)
    rep = Report("family", ["a", "b", "value"],
                 meta={"family": str(fid), "kind": fid.kind.label, "n": cfg.n,
                       "field": F.name, "residual_zero": res.holds},
                 ok=res.holds)
    for (a, b), val in P.table.items():
        rep.rows.append([f"e{a[0]}{a[1]}", f"e{b[0]}{b[1]}",
                         " + ".join(f"{F.format(v)}*e{s[0]}{s[1]}" for s, v in val.items())])
    rep.payload = {"family": str(fid), "kind": fid.kind.label, "residual_zero": res.holds,
                   "product": P.to_json()}
    return rep


def _classifiable_kind(cfg: RunConfig) -> IdentityKind:
    kind = cfg.kind_obj()
    if kind not in c3.FORM_OF_KIND:
        raise UsageError(f"n = 3 classification is available for id, 12 and inter, not {cfg.kind}")
    return kind


def cmd_classify3(cfg: RunConfig, path: str) -> Report:
    kind = _classifiable_kind(cfg)
    P = _load_product(path)
    if P.n != 3:
        raise UsageError(f"classification needs a product on UT_3, got UT_{P.n}")
    try:
        v = c3.product_to_lambda(P, c3.FORM_OF_KIND[kind])
        cls, wit = c3.canonical_form(v)
    except c3.ClassificationError as exc:
        raise UsageError(str(exc)) from None
    payload = dict(cls.to_json(), witness=wit.to_json())
    rep = Report("classify3", ["kind", "case", "params", "a11", "a22", "a31", "a32"],
                 payload=payload)
    w = wit.to_json()
    rep.rows.append([kind.label, cls.case, " ".join(payload["params"]),
                     w["a11"], w["a22"], w["a31"], w["a32"]])
    return rep


def cmd_orbits(cfg: RunConfig) -> Report:
    kind = _classifiable_kind(cfg)
    F = cfg.field_obj()
    if not isinstance(F, PrimeField) or F.p not in c3.CENSUS_PRIMES:
        raise UsageError(f"orbit census needs --field Fp:q with q in {c3.CENSUS_PRIMES}")
    res = c3.orbit_census(kind, F.p)
    rep = Report("orbits", ["kind", "q", "case", "params", "orbit_size"],
                 rows=res.csv_rows(), ok=res.consistent,
                 meta={"vectors": res.total, "associative": res.associative,
                       "orbits": res.orbits, "consistent": res.consistent})
    if res.problems:
        rep.meta["problems"] = "; ".join(res.problems[:5])
    return rep


def _parse_aut(text: str, F) -> c3.Aut3Params:
    parts = text.split(",")
    if len(parts) != 4:
        raise UsageError("--aut takes four comma-separated scalars a11,a22,a31,a32")
    try:
        return c3.Aut3Params(F, *(F.parse(p.strip()) for p in parts))
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_transform(cfg: RunConfig, path: str, aut: str) -> Report:
    P = _load_product(path)
    if P.n != 3:
        raise UsageError(f"automorphism parameters describe UT_3, got UT_{P.n}")
    p = _parse_aut(aut, P.field)
    Q = pushforward(P, c3.aut3_map(p))
    rep = Report("transform", ["a", "b", "value"], payload=Q.to_json(),
                 meta={"automorphism": aut})
    F = P.field
    for (a, b), val in Q.table.items():
        rep.rows.append([f"e{a[0]}{a[1]}", f"e{b[0]}{b[1]}",
                         " + ".join(f"{F.format(v)}*e{s[0]}{s[1]}" for s, v in val.items())])
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--n", type=int, default=3, help="matrix size (default 3)")
    common.add_argument("--field", default="Q", help="Q or Fp:<p> (default Q)")
    common.add_argument("--kind", default="id", choices=["id", "12", "inter", "total", "compat"])
    common.add_argument("--format", default="text", choices=["json", "csv", "text"])
    common.add_argument("--seed", type=int, default=0, help="seed for randomized checks")
    common.add_argument("--max-n", type=int, default=DEFAULT_MAX_N,
                        help=f"dimension cap (default {DEFAULT_MAX_N}, at most {HARD_MAX_N})")
    common.add_argument("--out", default=None, help="write the report here instead of stdout")

    ap = argparse.ArgumentParser(prog="utcompat",
                                 description="Compatible products on UT_n(K): solve, verify, classify.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("dim", parents=[common], help="kernel dimension table for n = 3..max-n")
    sub.add_parser("verify", parents=[common], help="check the product families of one kind")
    p = sub.add_parser("check", parents=[common], help="residuals of a product file")
    p.add_argument("product")
    sub.add_parser("kernel", parents=[common], help="export a kernel basis")
    p = sub.add_parser("family", parents=[common], help="print one product family, e.g. Mid1[2,1]")
    p.add_argument("name")
    p = sub.add_parser("classify3", parents=[common], help="normal form of a UT_3 product file")
    p.add_argument("product")
    sub.add_parser("orbits", parents=[common], help="exhaustive orbit census over F_q")
    p = sub.add_parser("transform", parents=[common], help="apply a UT_3 automorphism")
    p.add_argument("product")
    p.add_argument("--aut", required=True, help="a11,a22,a31,a32")
    return ap


def run(argv=None) -> tuple[int, str, str | None]:
    """Parse arguments; return (exit code, rendered output, output path or None)."""
    ns = build_parser().parse_args(argv)
    cfg = RunConfig.from_args(ns)
    cmd = ns.command
    if cmd == "dim":
        rep = cmd_dim(cfg)
    elif cmd == "verify":
        rep = cmd_verify(cfg)
    elif cmd == "check":
        rep = cmd_check(cfg, ns.product)
    elif cmd == "kernel":
        rep = cmd_kernel(cfg)
    elif cmd == "family":
        rep = cmd_family(cfg, ns.name)
    elif cmd == "classify3":
        rep = cmd_classify3(cfg, ns.product)
    elif cmd == "orbits":
        rep = cmd_orbits(cfg)
    else:
        rep = cmd_transform(cfg, ns.product, ns.aut)
    return (EXIT_OK if rep.ok else EXIT_MISMATCH), rep.render(cfg.format), cfg.out


def main(argv=None) -> int:
    try:
        code, text, out = run(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # raised by argparse
        return EXIT_USAGE if exc.code else EXIT_OK
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
