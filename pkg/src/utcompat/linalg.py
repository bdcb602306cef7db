"""Sparse exact Gauss-Jordan elimination.

Rows are ``dict`` maps from column index to a nonzero raw field value.  The
pivot of a row is always its smallest column, so the echelon form (and the
kernel basis derived from it) depends only on the column order.
"""

from __future__ import annotations

from typing import Iterable

from .scalars import Field

Row = dict


def _axpy(field: Field, row: Row, f, piv: Row) -> None:
    """row -= f * piv, in place, dropping zeros."""
    mul, sub = field.mul, field.sub
    for k, v in piv.items():
        cur = row.get(k)
        if cur is None:
            nv = field.neg(mul(f, v))
        else:
            nv = sub(cur, mul(f, v))
        if nv:
            row[k] = nv
        else:
            del row[k]


def _scale(field: Field, row: Row, f) -> Row:
    mul = field.mul
    return {k: mul(f, v) for k, v in row.items()}


class Echelon:
    """Incrementally maintained row echelon form.

    Each stored row is monic at its smallest column.  Rows are only reduced
    against pivots to the left, so insertion is cheap; call
    :meth:`reduced` for the fully reduced form.
    """

    def __init__(self, field: Field):
        self.field = field
        self.pivots: dict[int, Row] = {}

    def reduce(self, row: Row) -> Row:
        r = dict(row)
        pivots = self.pivots
        while r:
            c = min(r)
            piv = pivots.get(c)
            if piv is None:
                break
            _axpy(self.field, r, r[c], piv)
        return r

    def add(self, row: Row) -> bool:
        """Insert a row; True if it increased the rank."""
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        self.pivots[c] = _scale(self.field, r, self.field.inv(r[c]))
        return True

    def extend(self, rows: Iterable[Row]) -> None:
        for row in rows:
            self.add(row)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduced(self) -> dict[int, Row]:
        """Reduced row echelon form: every pivot column is zero in other rows."""
        field = self.field
        out: dict[int, Row] = {}
        for c in sorted(self.pivots, reverse=True):
            row = dict(self.pivots[c])
            for k in sorted(k for k in row if k != c and k in out):
                f = row.get(k)
                if f:
                    _axpy(field, row, f, out[k])
            out[c] = row
        return dict(sorted(out.items()))


def rref(field: Field, rows: Iterable[Row]) -> dict[int, Row]:
    ech = Echelon(field)
    ech.extend(rows)
    return ech.reduced()


def rank(field: Field, rows: Iterable[Row]) -> int:
    ech = Echelon(field)
    ech.extend(rows)
    return ech.rank


def nullspace(field: Field, rows: Iterable[Row], ncols: int) -> list[Row]:
    """Basis of {x : row . x = 0 for every row}, one vector per free column.

    Vector ``f`` has a 1 at free column ``f``, zeros at the other free
    columns, and is returned in increasing order of ``f``.
    """
    red = rref(field, rows)
    by_col: dict[int, list[tuple[int, object]]] = {}
    for p, row in red.items():
        for k, v in row.items():
            if k != p:
                by_col.setdefault(k, []).append((p, v))
    one = field.one
    basis = []
    for f in range(ncols):
        if f in red:
            continue
        vec = {f: one}
        for p, v in by_col.get(f, ()):
            vec[p] = field.neg(v)
        basis.append(dict(sorted(vec.items())))
    return basis


def invert_matrix(field: Field, matrix: list[list]) -> list[list] | None:
    """Exact inverse of a dense square matrix, or None if singular."""
    m = len(matrix)
    a = [[field(x) for x in row] + [field.one if i == j else field.zero for j in range(m)]
         for i, row in enumerate(matrix)]
    for col in range(m):
        piv = next((r for r in range(col, m) if a[r][col]), None)
        if piv is None:
            return None
        a[col], a[piv] = a[piv], a[col]
        inv = field.inv(a[col][col])
        a[col] = [field.mul(inv, x) for x in a[col]]
        for r in range(m):
            if r != col and a[r][col]:
                f = a[r][col]
                a[r] = [field.sub(x, field.mul(f, y)) for x, y in zip(a[r], a[col])]
    return [row[m:] for row in a]
