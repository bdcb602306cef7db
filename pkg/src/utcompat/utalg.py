"""The algebra UT_n(K) of strictly upper triangular matrices.

Basis elements are the matrix units ``e_ij`` (1 <= i < j <= n), written as
1-based index pairs ``(i, j)`` and always ordered lexicographically.  A
bilinear product is stored as its structure-constant table: a map from basis
pairs to the (sparse) value of the product on that pair.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .linalg import invert_matrix
from .scalars import Field, field_from_spec

Index = tuple  # (i, j), 1-based, i < j


class DimensionError(ValueError):
    """Mismatched or invalid dimension, field, or index."""


@lru_cache(maxsize=None)
def basis(n: int) -> tuple[Index, ...]:
    """Matrix units of UT_n in lexicographic order."""
    if n < 2:
        raise DimensionError(f"n must be at least 2, got {n}")
    return tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1))


@lru_cache(maxsize=None)
def basis_index(n: int) -> dict[Index, int]:
    return {e: k for k, e in enumerate(basis(n))}


def generators(n: int) -> tuple[Index, ...]:
    return tuple((i, i + 1) for i in range(1, n))


def check_index(n: int, idx) -> Index:
    try:
        i, j = idx
    except (TypeError, ValueError):
        raise DimensionError(f"bad basis index {idx!r}") from None
    if not (isinstance(i, int) and isinstance(j, int) and 1 <= i < j <= n):
        raise DimensionError(f"e_{{{i},{j}}} is not a basis element of UT_{n}")
    return (i, j)


def dot_units(a: Index, b: Index):
    """e_a . e_b for matrix units: a unit index or None."""
    if a[1] == b[0]:
        return (a[0], b[1])
    return None


class Element:
    """An element of UT_n(K) as a sparse coefficient map."""

    __slots__ = ("n", "field", "coeffs")

    def __init__(self, n: int, field: Field, coeffs=None, *, _trusted=False):
        self.n = n
        self.field = field
        if _trusted:
            self.coeffs = coeffs
            return
        out = {}
        for idx, c in (coeffs or {}).items():
            idx = check_index(n, idx)
            c = field(c)
            if c:
                out[idx] = c
        self.coeffs = dict(sorted(out.items()))

    @classmethod
    def unit(cls, n: int, field: Field, i: int, j: int) -> Element:
        return cls(n, field, {(i, j): field.one})

    @classmethod
    def zero(cls, n: int, field: Field) -> Element:
        return cls(n, field, {}, _trusted=True)

    def __getitem__(self, idx) -> object:
        return self.coeffs.get(tuple(idx), self.field.zero)

    def _check(self, other: Element) -> None:
        if self.n != other.n or self.field != other.field:
            raise DimensionError(
                f"UT_{self.n}({self.field}) vs UT_{other.n}({other.field})")

    def __add__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.n, self.field, _combine(self.field, self.coeffs, other.coeffs, 1),
                       _trusted=True)

    def __sub__(self, other: Element) -> Element:
        self._check(other)
        return Element(self.n, self.field, _combine(self.field, self.coeffs, other.coeffs, -1),
                       _trusted=True)

    def __neg__(self) -> Element:
        return self.scale(self.field.neg(self.field.one))

    def scale(self, c) -> Element:
        c = self.field(c)
        if not c:
            return Element.zero(self.n, self.field)
        return Element(self.n, self.field,
                       {k: self.field.mul(c, v) for k, v in self.coeffs.items()}, _trusted=True)

    def __mul__(self, other: Element) -> Element:
        """Matrix product (the canonical product of UT_n)."""
        self._check(other)
        return Element(self.n, self.field, dot_dicts(self.field, self.coeffs, other.coeffs),
                       _trusted=True)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Element):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash((self.n, self.field, tuple(self.coeffs.items())))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "0"
        fmt = self.field.format
        return " + ".join(f"{fmt(c)}*e{i}{j}" if c != 1 else f"e{i}{j}"
                          for (i, j), c in self.coeffs.items())

    def to_json(self) -> list:
        return [[list(k), self.field.format(v)] for k, v in self.coeffs.items()]

    @classmethod
    def from_json(cls, n: int, field: Field, data) -> Element:
        coeffs = {}
        for item in data:
            idx, c = item
            idx = tuple(idx)
            if idx in coeffs:
                raise DimensionError(f"duplicate coordinate {idx}")
            coeffs[idx] = field.parse(str(c))
        return cls(n, field, coeffs)


def _combine(field: Field, x: dict, y: dict, sign: int) -> dict:
    out = dict(x)
    op = field.add if sign > 0 else field.sub
    for k, v in y.items():
        if k in out:
            nv = op(out[k], v)
            if nv:
                out[k] = nv
            else:
                del out[k]
        else:
            out[k] = v if sign > 0 else field.neg(v)
    return dict(sorted(out.items()))


def dot_dicts(field: Field, x: dict, y: dict) -> dict:
    """Canonical product of two sparse coefficient maps."""
    by_row: dict[int, list] = {}
    for (k, l), v in y.items():
        by_row.setdefault(k, []).append((l, v))
    out: dict = {}
    mul, add = field.mul, field.add
    for (i, j), u in x.items():
        for l, v in by_row.get(j, ()):
            key = (i, l)
            val = mul(u, v)
            out[key] = add(out[key], val) if key in out else val
    return {k: v for k, v in sorted(out.items()) if v}


def add_into(field: Field, acc: dict, vec: dict, coef=None) -> None:
    """acc += coef * vec in place (zeros dropped)."""
    add, mul = field.add, field.mul
    for k, v in vec.items():
        if coef is not None:
            v = mul(coef, v)
        if k in acc:
            nv = add(acc[k], v)
            if nv:
                acc[k] = nv
            else:
                del acc[k]
        elif v:
            acc[k] = v


class Product:
    """A bilinear product on UT_n(K), stored by its values on basis pairs."""

    __slots__ = ("n", "field", "table")

    def __init__(self, n: int, field: Field, table=None, *, _trusted=False):
        self.n = n
        self.field = field
        if _trusted:
            self.table = table
            return
        out = {}
        for (a, b), val in (table or {}).items():
            a = check_index(n, a)
            b = check_index(n, b)
            if isinstance(val, Element):
                if val.n != n or val.field != field:
                    raise DimensionError("table value lives in a different algebra")
                val = val.coeffs
            else:
                val = Element(n, field, val).coeffs
            if (a, b) in out:
                acc = dict(out[(a, b)])
                add_into(field, acc, val)
                val = acc
            if val:
                out[(a, b)] = dict(sorted(val.items()))
            else:
                out.pop((a, b), None)
        self.table = dict(sorted(out.items()))

    @classmethod
    def zero(cls, n: int, field: Field) -> Product:
        return cls(n, field, {}, _trusted=True)

    @classmethod
    def from_rules(cls, n: int, field: Field, rules: Iterable) -> Product:
        """Build from ``(a, b, out)`` unit triples meaning e_a * e_b += e_out."""
        table: dict = {}
        one = field.one
        for a, b, out in rules:
            acc = table.setdefault((check_index(n, a), check_index(n, b)), {})
            add_into(field, acc, {check_index(n, out): one})
        table = {k: dict(sorted(v.items())) for k, v in sorted(table.items()) if v}
        return cls(n, field, table, _trusted=True)

    def get(self, a: Index, b: Index) -> dict:
        return self.table.get((a, b), _EMPTY)

    def value(self, a, b) -> Element:
        a, b = check_index(self.n, a), check_index(self.n, b)
        return Element(self.n, self.field, dict(self.get(a, b)), _trusted=True)

    def _check(self, other: Product) -> None:
        if self.n != other.n or self.field != other.field:
            raise DimensionError(
                f"product on UT_{self.n}({self.field}) vs UT_{other.n}({other.field})")

    def _combine(self, other: Product, sign: int) -> Product:
        self._check(other)
        keys = sorted(set(self.table) | set(other.table))
        table = {}
        for k in keys:
            v = _combine(self.field, self.table.get(k, _EMPTY), other.table.get(k, _EMPTY), sign)
            if v:
                table[k] = v
        return Product(self.n, self.field, table, _trusted=True)

    def __add__(self, other: Product) -> Product:
        return self._combine(other, 1)

    def __sub__(self, other: Product) -> Product:
        return self._combine(other, -1)

    def scale(self, c) -> Product:
        field = self.field
        c = field(c)
        if not c:
            return Product.zero(self.n, field)
        table = {k: {s: field.mul(c, v) for s, v in val.items()} for k, val in self.table.items()}
        return Product(self.n, field, table, _trusted=True)

    def is_zero(self) -> bool:
        return not self.table

    def __eq__(self, other) -> bool:
        if not isinstance(other, Product):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.table == other.table

    def __hash__(self) -> int:
        return hash((self.n, self.field,
                     tuple((k, tuple(v.items())) for k, v in self.table.items())))

    def __repr__(self) -> str:
        if not self.table:
            return f"Product(UT_{self.n}, 0)"
        parts = []
        for (a, b), val in self.table.items():
            el = Element(self.n, self.field, val, _trusted=True)
            parts.append(f"e{a[0]}{a[1]}*e{b[0]}{b[1]}={el!r}")
        return f"Product(UT_{self.n}, " + ", ".join(parts) + ")"

    # coordinates in the unknown order (a, b, s), all lexicographic
    def to_vector(self) -> dict[int, object]:
        idx = basis_index(self.n)
        m = len(idx)
        vec = {}
        for (a, b), val in self.table.items():
            base = (idx[a] * m + idx[b]) * m
            for s, v in val.items():
                vec[base + idx[s]] = v
        return dict(sorted(vec.items()))

    @classmethod
    def from_vector(cls, n: int, field: Field, vec: dict) -> Product:
        bas = basis(n)
        m = len(bas)
        table: dict = {}
        for u, v in sorted(vec.items()):
            if not v:
                continue
            ab, s = divmod(u, m)
            a, b = divmod(ab, m)
            table.setdefault((bas[a], bas[b]), {})[bas[s]] = v
        return cls(n, field, table, _trusted=True)

    def to_json(self) -> dict:
        fmt = self.field.format
        return {
            "n": self.n,
            "field": self.field.name,
            "entries": [
                {"a": list(a), "b": list(b), "out": [[list(s), fmt(v)] for s, v in val.items()]}
                for (a, b), val in self.table.items()
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data) -> Product:
        try:
            n = data["n"]
            field = field_from_spec(data["field"])
            entries = data["entries"]
        except (KeyError, TypeError) as exc:
            raise ValueError(f"product JSON: missing or malformed key {exc}") from None
        except ValueError as exc:
            raise ValueError(f"product JSON: field: {exc}") from None
        if not isinstance(n, int):
            raise ValueError("product JSON: 'n' must be an integer")
        table = {}
        for k, entry in enumerate(entries):
            try:
                a, b = check_index(n, entry["a"]), check_index(n, entry["b"])
                out = Element.from_json(n, field, entry["out"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"product JSON: entries[{k}]: {exc}") from None
            if (a, b) in table:
                raise ValueError(f"product JSON: entries[{k}]: duplicate pair {a},{b}")
            table[(a, b)] = out
        return cls(n, field, table)

    @classmethod
    def loads(cls, text: str) -> Product:
        return cls.from_json(json.loads(text))


_EMPTY: dict = {}


@dataclass(frozen=True)
class UnitizedElement:
    """``delta * 1 + body`` in the unitization UT_n(K)^1 (inside T_n(K))."""

    delta: object
    body: Element

    def lmul(self, x: Element) -> Element:
        """self . x"""
        return x.scale(self.delta) + self.body * x

    def rmul(self, x: Element) -> Element:
        """x . self"""
        return x.scale(self.delta) + x * self.body


class LinearMap:
    """A linear endomorphism of UT_n(K); column c is the image of basis(n)[c]."""

    __slots__ = ("n", "field", "matrix", "_inverse")

    def __init__(self, n: int, field: Field, matrix):
        m = len(basis(n))
        rows = [[field(x) for x in row] for row in matrix]
        if len(rows) != m or any(len(r) != m for r in rows):
            raise DimensionError(f"linear map on UT_{n} needs a {m}x{m} matrix")
        self.n = n
        self.field = field
        self.matrix = tuple(tuple(r) for r in rows)
        self._inverse = None

    @classmethod
    def identity(cls, n: int, field: Field) -> LinearMap:
        m = len(basis(n))
        return cls(n, field, [[field.one if i == j else field.zero for j in range(m)]
                              for i in range(m)])

    @classmethod
    def from_images(cls, n: int, field: Field, images: dict) -> LinearMap:
        """Build from a map basis unit -> Element (missing units map to 0)."""
        bas = basis(n)
        idx = basis_index(n)
        m = len(bas)
        mat = [[field.zero] * m for _ in range(m)]
        for c, e in enumerate(bas):
            img = images.get(e)
            if img is None:
                continue
            for s, v in img.coeffs.items():
                mat[idx[s]][c] = v
        return cls(n, field, mat)

    def column(self, c: int) -> dict:
        bas = basis(self.n)
        return {bas[r]: self.matrix[r][c] for r in range(len(bas)) if self.matrix[r][c]}

    def image_dict(self, vec: dict) -> dict:
        idx = basis_index(self.n)
        acc: dict = {}
        for e, v in vec.items():
            add_into(self.field, acc, self.column(idx[e]), v)
        return dict(sorted(acc.items()))

    def __call__(self, x: Element) -> Element:
        if x.n != self.n or x.field != self.field:
            raise DimensionError("linear map applied to an element of another algebra")
        return Element(self.n, self.field, self.image_dict(x.coeffs), _trusted=True)

    def inverse(self) -> LinearMap:
        if self._inverse is None:
            inv = invert_matrix(self.field, [list(r) for r in self.matrix])
            if inv is None:
                raise ValueError("linear map is singular")
            self._inverse = LinearMap(self.n, self.field, inv)
        return self._inverse

    def is_invertible(self) -> bool:
        try:
            self.inverse()
        except ValueError:
            return False
        return True

    def compose(self, other: LinearMap) -> LinearMap:
        """self o other"""
        f = self.field
        m = len(self.matrix)
        mat = [[f.zero] * m for _ in range(m)]
        for i in range(m):
            for j in range(m):
                acc = f.zero
                for k in range(m):
                    if self.matrix[i][k] and other.matrix[k][j]:
                        acc = f.add(acc, f.mul(self.matrix[i][k], other.matrix[k][j]))
                mat[i][j] = acc
        return LinearMap(self.n, f, mat)

    def __eq__(self, other) -> bool:
        if not isinstance(other, LinearMap):
            return NotImplemented
        return self.n == other.n and self.field == other.field and self.matrix == other.matrix

    def __hash__(self) -> int:
        return hash((self.n, self.field, self.matrix))

    def __repr__(self) -> str:
        return f"LinearMap(UT_{self.n}, {self.field}, {self.matrix})"


# -- products -------------------------------------------------------------

@lru_cache(maxsize=None)
def canonical_product(n: int, field: Field) -> Product:
    """Matrix multiplication e_ij . e_kl = delta_jk e_il."""
    one = field.one
    table = {((i, j), (j, l)): {(i, l): one}
             for (i, j) in basis(n) for l in range(j + 1, n + 1)}
    return Product(n, field, dict(sorted(table.items())), _trusted=True)


def _check_args(P: Product, *xs: Element) -> None:
    for x in xs:
        if x.n != P.n or x.field != P.field:
            raise DimensionError(
                f"element of UT_{x.n}({x.field}) used with a product on UT_{P.n}({P.field})")


def eval_dicts(P: Product, x: dict, y: dict) -> dict:
    field = P.field
    acc: dict = {}
    mul = field.mul
    table = P.table
    for a, u in x.items():
        for b, v in y.items():
            val = table.get((a, b))
            if val:
                add_into(field, acc, val, mul(u, v))
    return dict(sorted(acc.items()))


def evaluate(P: Product, x: Element, y: Element) -> Element:
    """P(x, y) extended bilinearly from the basis table."""
    _check_args(P, x, y)
    return Element(P.n, P.field, eval_dicts(P, x.coeffs, y.coeffs), _trusted=True)


def associator(P: Product, a: Element, b: Element, c: Element) -> Element:
    """(a*b)*c - a*(b*c)"""
    _check_args(P, a, b, c)
    left = eval_dicts(P, eval_dicts(P, a.coeffs, b.coeffs), c.coeffs)
    right = eval_dicts(P, a.coeffs, eval_dicts(P, b.coeffs, c.coeffs))
    return Element(P.n, P.field, _combine(P.field, left, right, -1), _trusted=True)


class AssociativityReport(NamedTuple):
    associative: bool
    triple: tuple | None = None
    value: Element | None = None


def is_associative(P: Product) -> AssociativityReport:
    """Check the associator on every basis triple, in lexicographic order."""
    bas = basis(P.n)
    field = P.field
    one = field.one
    for a in bas:
        for b in bas:
            ab = P.table.get((a, b), _EMPTY)
            for c in bas:
                bc = P.table.get((b, c), _EMPTY)
                if not ab and not bc:
                    continue
                left = eval_dicts(P, ab, {c: one}) if ab else {}
                right = eval_dicts(P, {a: one}, bc) if bc else {}
                diff = _combine(field, left, right, -1)
                if diff:
                    return AssociativityReport(
                        False, (a, b, c), Element(P.n, field, diff, _trusted=True))
    return AssociativityReport(True)


def mutation_product(n: int, x: Element) -> Product:
    """The mutation a ._x b = a . x . b."""
    if x.n != n:
        raise DimensionError(f"element of UT_{x.n} used to mutate UT_{n}")
    field = x.field
    one = field.one
    bas = basis(n)
    table = {}
    for a in bas:
        ax = dot_dicts(field, {a: one}, x.coeffs)
        if not ax:
            continue
        for b in bas:
            val = dot_dicts(field, ax, {b: one})
            if val:
                table[(a, b)] = val
    return Product(n, field, table, _trusted=True)


def annihilator_structure(n: int, field: Field, mu) -> Product:
    """e_{i,i+1} * e_{j,j+1} = mu[i-1][j-1] e_{1n}; zero on UT_n^2.

    ``mu`` is an (n-1)x(n-1) matrix of field values indexed from 0.
    """
    rows = [list(r) for r in mu]
    if len(rows) != n - 1 or any(len(r) != n - 1 for r in rows):
        raise DimensionError(f"annihilator-valued product on UT_{n} needs an "
                             f"{n - 1}x{n - 1} matrix")
    table = {}
    for i in range(1, n):
        for j in range(1, n):
            c = field(rows[i - 1][j - 1])
            if c:
                table[((i, i + 1), (j, j + 1))] = {(1, n): c}
    return Product(n, field, dict(sorted(table.items())), _trusted=True)


@lru_cache(maxsize=None)
def involution_map(n: int, field: Field) -> LinearMap:
    """e_ij -> e_{n-j+1, n-i+1}: an antiautomorphism of UT_n, self-inverse."""
    one = field.one
    images = {(i, j): Element(n, field, {(n - j + 1, n - i + 1): one}, _trusted=True)
              for (i, j) in basis(n)}
    return LinearMap.from_images(n, field, images)


def _push(P: Product, L: LinearMap, swap: bool) -> Product:
    if L.n != P.n or L.field != P.field:
        raise DimensionError("linear map and product live on different algebras")
    Linv = L.inverse()
    bas = basis(P.n)
    cols = [Linv.column(k) for k in range(len(bas))]
    table = {}
    for ia, a in enumerate(bas):
        for ib, b in enumerate(bas):
            x, y = cols[ia], cols[ib]
            if swap:
                x, y = y, x
            val = eval_dicts(P, x, y)
            if val:
                val = L.image_dict(val)
                if val:
                    table[(a, b)] = val
    return Product(P.n, P.field, table, _trusted=True)


def pushforward(P: Product, L: LinearMap) -> Product:
    """a # b = L(P(L^-1 a, L^-1 b))."""
    return _push(P, L, swap=False)


def opposite_pushforward(P: Product, L: LinearMap) -> Product:
    """a # b = L(P(L^-1 b, L^-1 a)); for L an antiautomorphism of (UT_n, .)."""
    return _push(P, L, swap=True)


def linear_combination(n: int, field: Field, coeffs, products) -> Product:
    acc: dict = {}
    for c, P in zip(coeffs, products):
        c = field(c)
        if not c:
            continue
        for k, val in P.table.items():
            cur = acc.setdefault(k, {})
            add_into(field, cur, val, c)
    table = {k: dict(sorted(v.items())) for k, v in sorted(acc.items()) if v}
    return Product(n, field, table, _trusted=True)
