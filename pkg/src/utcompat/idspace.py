"""Compatibility identities between the canonical product and a second product.

With the matrix product ``.`` held fixed, each identity is linear in the
structure constants of the second product ``*``.  For a basis triple
``(a, b, c)`` there are four monomials::

    (a.b)*c    (a*b).c    a.(b*c)    a*(b.c)

and each identity kind equates some of them.  :func:`residual` evaluates the
equations directly on a concrete product; :func:`assemble` writes them as
sparse linear rows over the unknown constants so that :func:`kernel` can
solve for every product satisfying them.
"""

from __future__ import annotations

import enum
import logging
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import NamedTuple

from .linalg import Echelon, nullspace, rank, rref
from .scalars import Field
from .utalg import (Element, Product, _EMPTY, _combine, basis, basis_index, dot_units,
                    generators)

log = logging.getLogger(__name__)

DEFAULT_MAX_N = 6
HARD_MAX_N = 8


class IdentityKind(enum.Enum):
    COMPATIBLE = "compat"
    MATCH_ID = "id"
    MATCH_TWELVE = "12"
    INTERCHANGEABLE = "inter"
    TOTALLY_COMPATIBLE = "total"

    @classmethod
    def parse(cls, text: str) -> IdentityKind:
        aliases = {
            "compat": cls.COMPATIBLE, "compatible": cls.COMPATIBLE,
            "id": cls.MATCH_ID, "matchid": cls.MATCH_ID,
            "12": cls.MATCH_TWELVE, "matchtwelve": cls.MATCH_TWELVE,
            "inter": cls.INTERCHANGEABLE, "interchangeable": cls.INTERCHANGEABLE,
            "total": cls.TOTALLY_COMPATIBLE, "totallycompatible": cls.TOTALLY_COMPATIBLE,
        }
        try:
            return aliases[text.lower().replace("_", "").replace("-", "")]
        except KeyError:
            raise ValueError(f"unknown identity kind {text!r}") from None

    @property
    def label(self) -> str:
        return _LABELS[self]


_LABELS = {
    IdentityKind.COMPATIBLE: "Compatible",
    IdentityKind.MATCH_ID: "MatchId",
    IdentityKind.MATCH_TWELVE: "MatchTwelve",
    IdentityKind.INTERCHANGEABLE: "Interchangeable",
    IdentityKind.TOTALLY_COMPATIBLE: "TotallyCompatible",
}

ALL_KINDS = tuple(IdentityKind)
SOLVED_KINDS = (IdentityKind.MATCH_ID, IdentityKind.MATCH_TWELVE,
                IdentityKind.INTERCHANGEABLE, IdentityKind.TOTALLY_COMPATIBLE)

# monomial slots: 0 = (a.b)*c, 1 = (a*b).c, 2 = a.(b*c), 3 = a*(b.c)
MONOMIALS = ("(a.b)*c", "(a*b).c", "a.(b*c)", "a*(b.c)")

# each equation: list of (sign, monomial slot); the equation is sum == 0
EQUATIONS: dict[IdentityKind, tuple[tuple[str, tuple[tuple[int, int], ...]], ...]] = {
    IdentityKind.COMPATIBLE: (
        ("(a.b)*c + (a*b).c = a.(b*c) + a*(b.c)", ((1, 0), (1, 1), (-1, 2), (-1, 3))),
    ),
    IdentityKind.MATCH_ID: (
        ("(a.b)*c = a.(b*c)", ((1, 0), (-1, 2))),
        ("(a*b).c = a*(b.c)", ((1, 1), (-1, 3))),
    ),
    IdentityKind.MATCH_TWELVE: (
        ("(a.b)*c = a*(b.c)", ((1, 0), (-1, 3))),
        ("(a*b).c = a.(b*c)", ((1, 1), (-1, 2))),
    ),
    IdentityKind.INTERCHANGEABLE: (
        ("(a.b)*c = (a*b).c", ((1, 0), (-1, 1))),
        ("a.(b*c) = a*(b.c)", ((1, 2), (-1, 3))),
    ),
    IdentityKind.TOTALLY_COMPATIBLE: (
        ("(a.b)*c = (a*b).c", ((1, 0), (-1, 1))),
        ("(a.b)*c = a.(b*c)", ((1, 0), (-1, 2))),
        ("(a.b)*c = a*(b.c)", ((1, 0), (-1, 3))),
    ),
}


# -- residuals ------------------------------------------------------------

class ResidualEntry(NamedTuple):
    triple: tuple
    equation: str
    value: Element


@dataclass
class ResidualReport:
    kind: IdentityKind
    entries: list = dc_field(default_factory=list)

    @property
    def holds(self) -> bool:
        return not self.entries

    def __bool__(self) -> bool:
        return self.holds

    def to_json(self, limit: int | None = None) -> dict:
        items = self.entries if limit is None else self.entries[:limit]
        return {
            "kind": self.kind.label,
            "holds": self.holds,
            "violations": len(self.entries),
            "entries": [{"triple": [list(t) for t in e.triple], "equation": e.equation,
                         "value": e.value.to_json()} for e in items],
        }


def _left_dot(field, a, vec):
    """e_a . vec"""
    i, j = a
    return {(i, l): v for (k, l), v in vec.items() if k == j}


def _right_dot(field, vec, c):
    """vec . e_c"""
    k, l = c
    return {(i, l): v for (i, j), v in vec.items() if j == k}


def monomials(P: Product, a, b, c) -> list[dict]:
    """The four monomial values at a basis triple, as sparse coefficient maps."""
    table = P.table
    ab_dot = dot_units(a, b)
    bc_dot = dot_units(b, c)
    m0 = table.get((ab_dot, c), _EMPTY) if ab_dot else _EMPTY
    ab = table.get((a, b))
    m1 = _right_dot(P.field, ab, c) if ab else _EMPTY
    bc = table.get((b, c))
    m2 = _left_dot(P.field, a, bc) if bc else _EMPTY
    m3 = table.get((a, bc_dot), _EMPTY) if bc_dot else _EMPTY
    return [m0, m1, m2, m3]


def residual(kind: IdentityKind, P: Product) -> ResidualReport:
    """Evaluate every defining equation of ``kind`` on all basis triples."""
    field = P.field
    bas = basis(P.n)
    eqs = EQUATIONS[kind]
    report = ResidualReport(kind)
    for a in bas:
        for b in bas:
            for c in bas:
                ms = monomials(P, a, b, c)
                if not (ms[0] or ms[1] or ms[2] or ms[3]):
                    continue
                for tag, terms in eqs:
                    acc: dict = {}
                    for sign, slot in terms:
                        if ms[slot]:
                            acc = _combine(field, acc, ms[slot], sign)
                    if acc:
                        report.entries.append(ResidualEntry(
                            (a, b, c), tag, Element(P.n, field, acc, _trusted=True)))
    return report


# -- linear system ----------------------------------------------------------

@dataclass
class ConstraintSystem:
    n: int
    field: Field
    kind: IdentityKind
    rows: list

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(basis(self.n)) ** 3


def unknown(n: int, a, b, s) -> int:
    """Column of the structure constant (coefficient of e_s in e_a * e_b)."""
    idx = basis_index(n)
    m = len(idx)
    return (idx[a] * m + idx[b]) * m + idx[s]


def _linear_monomials(n: int, a, b, c):
    """Each monomial as {output unit: {unknown column: 1}}."""
    idx = basis_index(n)
    m = len(idx)
    bas = basis(n)

    def col(x, y, s):
        return (idx[x] * m + idx[y]) * m + idx[s]

    out = [{}, {}, {}, {}]
    ab = dot_units(a, b)
    if ab:
        out[0] = {s: {col(ab, c, s): 1} for s in bas}
    k, l = c  # (a*b).c picks the (x, k) coordinate of a*b into (x, l)
    out[1] = {(x, l): {col(a, b, (x, k)): 1} for x in range(1, k)}
    i, j = a  # a.(b*c) picks the (j, l) coordinate of b*c into (i, l)
    out[2] = {(i, l): {col(b, c, (j, l)): 1} for l in range(j + 1, n + 1)}
    bc = dot_units(b, c)
    if bc:
        out[3] = {s: {col(a, bc, s): 1} for s in bas}
    return out


def assemble(kind: IdentityKind, n: int, field: Field) -> ConstraintSystem:
    """One sparse row per (equation, basis triple, output coordinate)."""
    bas = basis(n)
    eqs = EQUATIONS[kind]
    rows = []
    for a in bas:
        for b in bas:
            for c in bas:
                ms = _linear_monomials(n, a, b, c)
                for _tag, terms in eqs:
                    outs = set()
                    for _sign, slot in terms:
                        outs.update(ms[slot])
                    for s in sorted(outs):
                        row: dict = {}
                        for sign, slot in terms:
                            for u, coef in ms[slot].get(s, _EMPTY).items():
                                row[u] = row.get(u, 0) + sign * coef
                        row = {u: field(v) for u, v in sorted(row.items()) if field(v)}
                        if row:
                            rows.append(row)
    return ConstraintSystem(n, field, kind, rows)


@dataclass
class KernelBasis:
    n: int
    field: Field
    kind: IdentityKind
    basis: list  # Products
    pivots: list  # unknown columns
    vectors: list  # same vectors as sparse dicts

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def __len__(self) -> int:
        return len(self.basis)

    def to_json(self) -> dict:
        return {
            "kind": self.kind.label,
            "n": self.n,
            "field": self.field.name,
            "dimension": self.dimension,
            "pivots": list(self.pivots),
            "basis": [P.to_json() for P in self.basis],
        }


class KernelVerificationError(AssertionError):
    pass


def kernel(S: ConstraintSystem, verify: bool = True) -> KernelBasis:
    """Reduced-echelon basis of the solution space of ``S``.

    The basis vectors are rows of the reduced echelon form of the solution
    space, so each pivot column is 1 in exactly one vector and 0 elsewhere.
    With ``verify`` every vector is re-checked by direct evaluation.
    """
    field = S.field
    free_basis = nullspace(field, S.rows, S.ncols)
    red = rref(field, free_basis)
    pivots = list(red)
    vectors = [red[p] for p in pivots]
    products = [Product.from_vector(S.n, field, v) for v in vectors]
    if verify:
        for k, P in enumerate(products):
            rep = residual(S.kind, P)
            if not rep.holds:
                e = rep.entries[0]
                raise KernelVerificationError(
                    f"kernel vector {k} fails {e.equation} at {e.triple}: {e.value!r}")
    return KernelBasis(S.n, field, S.kind, products, pivots, vectors)


def check_dimension_cap(n: int, max_n: int = DEFAULT_MAX_N) -> None:
    if n < 3:
        raise ValueError(f"n must be at least 3, got {n}")
    if max_n > HARD_MAX_N:
        raise ValueError(f"dimension cap {max_n} exceeds the hard limit {HARD_MAX_N}")
    if n > max_n:
        raise ValueError(f"n={n} exceeds the dimension cap {max_n}; raise it with max_n")
    if n > DEFAULT_MAX_N:
        log.warning("kernel computation at n=%d has %d unknowns and may be slow",
                    n, len(basis(n)) ** 3)


@lru_cache(maxsize=64)
def solve(kind: IdentityKind, n: int, field: Field, max_n: int = DEFAULT_MAX_N) -> KernelBasis:
    """assemble + kernel, cached per (kind, n, field)."""
    check_dimension_cap(n, max_n)
    return kernel(assemble(kind, n, field))


def dimension(kind: IdentityKind, n: int, field: Field, max_n: int = DEFAULT_MAX_N) -> int:
    return solve(kind, n, field, max_n).dimension


def membership(P: Product, B: KernelBasis):
    """Coordinates of P in the kernel basis, or None if P is outside the span."""
    if P.n != B.n or P.field != B.field:
        raise ValueError("product and kernel basis live on different algebras")
    field = B.field
    vec = P.to_vector()
    coords = [vec.get(p, field.zero) for p in B.pivots]
    rest = dict(vec)
    for c, v in zip(coords, B.vectors):
        if not c:
            continue
        for k, x in v.items():
            nv = field.sub(rest.get(k, field.zero), field.mul(c, x))
            if nv:
                rest[k] = nv
            else:
                rest.pop(k, None)
    if rest:
        return None
    return coords


def generator_restriction_rank(kind: IdentityKind, n: int, field: Field,
                               max_n: int = DEFAULT_MAX_N) -> int:
    """Rank of kernel vectors restricted to generator pairs (e_{i,i+1}, e_{j,j+1})."""
    if kind is not IdentityKind.MATCH_ID:
        raise ValueError("generator restriction is defined for the id-matching identity")
    B = solve(kind, n, field, max_n)
    idx = basis_index(n)
    m = len(idx)
    gens = [idx[g] for g in generators(n)]
    cols = set()
    for x in gens:
        for y in gens:
            base = (x * m + y) * m
            cols.update(range(base, base + m))
    rows = [{k: v for k, v in vec.items() if k in cols} for vec in B.vectors]
    return rank(field, rows)


def span_rank(products, field: Field) -> int:
    """Rank of a list of products as vectors in the unknown coordinates."""
    return rank(field, [P.to_vector() for P in products])


def basis_in_echelon(B: KernelBasis) -> bool:
    """Each pivot is 1 in its own vector and 0 in every other vector."""
    for k, p in enumerate(B.pivots):
        for j, v in enumerate(B.vectors):
            want = B.field.one if j == k else B.field.zero
            if v.get(p, B.field.zero) != want:
                return False
        if min(B.vectors[k]) != p:
            return False
    return True


__all__ = [
    "IdentityKind", "ALL_KINDS", "SOLVED_KINDS", "EQUATIONS", "MONOMIALS",
    "ResidualEntry", "ResidualReport", "residual", "monomials",
    "ConstraintSystem", "assemble", "unknown", "KernelBasis", "kernel", "solve",
    "dimension", "membership", "generator_restriction_rank", "span_rank",
    "check_dimension_cap", "basis_in_echelon", "Echelon",
    "DEFAULT_MAX_N", "HARD_MAX_N", "KernelVerificationError",
]
