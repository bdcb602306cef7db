"""Explicit product families on UT_n(K) spanning each solution space.

Family names follow a bracket grammar: ``Mid1[i,j]``, ``M12_2[i]``, ``I3[i]``,
``T2`` and so on.  Series order inside a basis follows the order in which the
series are introduced (Mid1..Mid4, M12_1..M12_4, I1..I4, T1, T2), then
lexicographic indices.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .idspace import IdentityKind
from .scalars import Field
from .utalg import Element, Product, UnitizedElement, basis, check_index, dot_dicts

SERIES_KIND = {
    "Mid1": IdentityKind.MATCH_ID, "Mid2": IdentityKind.MATCH_ID,
    "Mid3": IdentityKind.MATCH_ID, "Mid4": IdentityKind.MATCH_ID,
    "M12_1": IdentityKind.MATCH_TWELVE, "M12_2": IdentityKind.MATCH_TWELVE,
    "M12_3": IdentityKind.MATCH_TWELVE, "M12_4": IdentityKind.MATCH_TWELVE,
    "I1": IdentityKind.INTERCHANGEABLE, "I2": IdentityKind.INTERCHANGEABLE,
    "I3": IdentityKind.INTERCHANGEABLE, "I4": IdentityKind.INTERCHANGEABLE,
    "T1": IdentityKind.TOTALLY_COMPATIBLE, "T2": IdentityKind.TOTALLY_COMPATIBLE,
}

ARITY = {
    "Mid1": 2, "Mid2": 2, "Mid3": 2, "Mid4": 2,
    "M12_1": 2, "M12_2": 1, "M12_3": 2, "M12_4": 0,
    "I1": 2, "I2": 1, "I3": 1, "I4": 0,
    "T1": 2, "T2": 0,
}

KIND_SERIES = {
    IdentityKind.MATCH_ID: ("Mid1", "Mid2", "Mid3", "Mid4"),
    IdentityKind.MATCH_TWELVE: ("M12_1", "M12_2", "M12_3", "M12_4"),
    IdentityKind.INTERCHANGEABLE: ("I1", "I2", "I3", "I4"),
    IdentityKind.TOTALLY_COMPATIBLE: ("T1", "T2"),
}

_NAME = re.compile(r"^(Mid[1-4]|M12_[1-4]|I[1-4]|T[12])(?:\[(\d+)(?:,(\d+))?\])?$")


class FamilyError(ValueError):
    """A family index outside the stated range."""


@dataclass(frozen=True, order=True)
class FamilyId:
    series: str
    indices: tuple = ()

    def __post_init__(self):
        if self.series not in SERIES_KIND:
            raise FamilyError(f"unknown family series {self.series!r}")
        object.__setattr__(self, "indices", tuple(int(i) for i in self.indices))
        if len(self.indices) != ARITY[self.series]:
            raise FamilyError(f"{self.series} takes {ARITY[self.series]} indices, "
                              f"got {len(self.indices)}")

    @property
    def kind(self) -> IdentityKind:
        return SERIES_KIND[self.series]

    @classmethod
    def parse(cls, text: str) -> FamilyId:
        m = _NAME.match(text.replace(" ", ""))
        if m is None:
            raise FamilyError(f"malformed family name {text!r}")
        series, i, j = m.groups()
        indices = tuple(int(x) for x in (i, j) if x is not None)
        return cls(series, indices)

    def __str__(self) -> str:
        if not self.indices:
            return self.series
        return f"{self.series}[{','.join(map(str, self.indices))}]"


def validate(fid: FamilyId, n: int) -> None:
    """Raise FamilyError when ``fid`` is not a listed basis family on UT_n."""
    s, ix = fid.series, fid.indices
    if n < 3:
        raise FamilyError("families are defined for n >= 3")

    def need(cond, why):
        if not cond:
            raise FamilyError(f"{fid} on UT_{n}: requires {why}")

    if s in ("Mid1", "M12_1", "I1", "T1"):
        i, j = ix
        need(1 < i <= n and 1 <= j < n, "1 < i <= n and 1 <= j < n")
    elif s == "Mid2":
        i, j = ix
        need(1 < i <= n and 1 <= j < n, "1 < i <= n and 1 <= j < n")
        need((i, j) != (2, n - 1), "(i, j) != (2, n-1), where Mid2 coincides with Mid1")
    elif s == "Mid3":
        i, j = ix
        need(2 < i <= j + 1 < n, "2 < i <= j+1 < n")
    elif s == "Mid4":
        i, j = ix
        need(2 < i <= n and 1 <= j < n - 1, "2 < i <= n and 1 <= j < n-1")
    elif s == "M12_2":
        (i,) = ix
        need(1 <= i < n, "1 <= i < n")
    elif s == "M12_3":
        i, j = ix
        need(1 <= i < j <= n and j > i + 2, "1 <= i < j <= n and j > i+2")
    elif s == "M12_4":
        need(n > 4, "n > 4 (at n = 4 it equals M12_2[2], at n = 3 it does not exist)")
    elif s in ("I2", "I3"):
        (i,) = ix
        need(1 <= i < n - 1, "1 <= i < n-1")
    elif s == "I4":
        need(n > 4, "n > 4 (at n = 3, 4 it lies in the span of I1, I2, I3)")
    elif s == "T2":
        need(n > 3, "n > 3 (at n = 3 it equals T1[2,2])")


def _rules(fid: FamilyId, n: int):
    """The multiplication table as (a, b, out) unit triples."""
    s, ix = fid.series, fid.indices
    if s == "Mid1":
        i, j = ix
        return [((i - 1, i), (j, l), (1, l)) for l in range(j + 1, n + 1)]
    if s == "Mid2":
        i, j = ix
        return [((k, i), (j, j + 1), (k, n)) for k in range(1, i)]
    if s == "Mid3":
        i, j = ix
        return [((k, i), (j, l), (k, l)) for k in range(1, i) for l in range(j + 1, n + 1)]
    if s in ("Mid4", "M12_1", "I1", "T1"):
        i, j = ix
        return [((i - 1, i), (j, j + 1), (1, n))]
    if s == "M12_2":
        (i,) = ix
        return [((1, 2), (i, i + 1), (1, n - 1)), ((i, i + 1), (n - 1, n), (2, n))]
    if s == "M12_3":
        i, j = ix
        return [((i, k), (k, j), (1, n)) for k in range(i + 1, j)]
    if s == "M12_4":
        return [((i, k), (k, j), (i, j)) for i in range(1, n + 1) for k in range(i + 1, n + 1)
                for j in range(k + 1, n + 1) if (i, j) != (1, n)]
    if s == "I2":
        (i,) = ix
        return [((1, 2), (i, i + 2), (1, n)), ((i, i + 1), (i + 1, i + 2), (2, n))]
    if s == "I3":
        (i,) = ix
        return [((i, i + 2), (n - 1, n), (1, n)), ((i, i + 1), (i + 1, i + 2), (1, n - 1))]
    if s in ("I4", "T2"):
        return [((i, k), (k, j), (i, j)) for i in range(1, n + 1) for k in range(i + 1, n + 1)
                for j in range(k + 1, n + 1)]
    raise FamilyError(f"unknown series {s}")  # pragma: no cover


def make_family(fid: FamilyId | str, n: int, field: Field, validate_indices: bool = True) -> Product:
    """The product of family ``fid`` on UT_n(K).

    With ``validate_indices=False`` the defining rules are applied to any
    indices that name basis units, which is how the excluded coincidences
    (e.g. Mid2[2,n-1] = Mid1[2,n-1]) are reproduced.
    """
    if isinstance(fid, str):
        fid = FamilyId.parse(fid)
    if validate_indices:
        validate(fid, n)
    try:
        return Product.from_rules(n, field, _rules(fid, n))
    except ValueError as exc:
        raise FamilyError(f"{fid} on UT_{n}: {exc}") from None


def family_ids(kind: IdentityKind, n: int) -> list[FamilyId]:
    if kind not in KIND_SERIES:
        raise ValueError(f"no product families for {kind.label}")
    out = []
    for s in KIND_SERIES[kind]:
        arity = ARITY[s]
        if arity == 0:
            cands = [()]
        elif arity == 1:
            cands = [(i,) for i in range(1, n + 1)]
        else:
            cands = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
        for ix in cands:
            fid = FamilyId(s, ix)
            try:
                validate(fid, n)
            except FamilyError:
                continue
            out.append(fid)
    return out


def family_basis(kind: IdentityKind, n: int, field: Field) -> list[Product]:
    return [make_family(fid, n, field) for fid in family_ids(kind, n)]


def expected_count(kind: IdentityKind, n: int) -> int:
    """Closed-form number of independent families (the solution-space dimension)."""
    if n < 3:
        raise ValueError("n must be at least 3")
    if kind is IdentityKind.MATCH_ID:
        return 7 * (n - 2) * (n - 1) // 2 + 1
    if kind is IdentityKind.MATCH_TWELVE:
        return n * (3 * n - 7) // 2 + 3 + (1 if n > 4 else 0)
    if kind is IdentityKind.INTERCHANGEABLE:
        return n * n - 3 + (1 if n > 4 else 0)
    if kind is IdentityKind.TOTALLY_COMPATIBLE:
        return (n - 1) ** 2 + (1 if n > 3 else 0)
    raise ValueError(f"no closed-form count for {kind.label}")


def _unitized_factor(x, unit, left: bool, n: int, field: Field):
    """Coefficient form of the A^1 factor p (x = p.unit + u) or q (x = unit.q + v)."""
    one = field.one
    (r, c) = unit
    if x == unit:
        return UnitizedElement(one, Element.zero(n, field))
    if left and x[1] == c and x[0] < r:
        return UnitizedElement(field.zero, Element(n, field, {(x[0], r): one}))
    if not left and x[0] == r and x[1] > c:
        return UnitizedElement(field.zero, Element(n, field, {(c, x[1]): one}))
    return None


def product_from_triple(n: int, i: int, j: int, c: Element) -> Product:
    """The product x * y = p c q built from a = e_{i-1,i}, b = e_{j,j+1} and c.

    ``x = p.a + u`` and ``y = b.q + v`` split x, y along the decompositions
    UT_n = UT_n^1 a (+) UT_n (delta - e_i) and UT_n = b UT_n^1 (+) (delta - e_j) UT_n.
    """
    if not (1 < i <= n and 1 <= j < n):
        raise FamilyError(f"triple constructor needs 1 < i <= n and 1 <= j < n, got ({i}, {j})")
    if c.n != n:
        raise FamilyError(f"c lives in UT_{c.n}, expected UT_{n}")
    field = c.field
    a = check_index(n, (i - 1, i))
    b = check_index(n, (j, j + 1))
    bas = basis(n)
    table = {}
    for x in bas:
        p = _unitized_factor(x, a, True, n, field)
        if p is None:
            continue
        pc = p.lmul(c)
        if not pc:
            continue
        for y in bas:
            q = _unitized_factor(y, b, False, n, field)
            if q is None:
                continue
            val = q.rmul(pc)
            if val:
                table[(x, y)] = val.coeffs
    return Product(n, field, table, _trusted=True)


PROOF_CHOICES = {
    "Mid1": lambda n, i, j: (1, j + 1),
    "Mid2": lambda n, i, j: (i - 1, n),
    "Mid3": lambda n, i, j: (i - 1, j + 1),
    "Mid4": lambda n, i, j: (1, n),
}


__all__ = [
    "FamilyId", "FamilyError", "make_family", "family_ids", "family_basis",
    "expected_count", "product_from_triple", "validate", "PROOF_CHOICES", "KIND_SERIES",
    "dot_dicts",
]
