"""Sparse exact linear algebra over a :class:`~derproj.arith.Field`.

Rows are dicts ``{column: nonzero value}``. Only what homology needs is here:
rank, nullspace, products and transposes.
"""

from __future__ import annotations

from typing import Dict, Iterable, List

from .arith import Field, _q
from .errors import ContextError

Vector = Dict[int, object]


def _reduce_into(row: Vector, pivots: Dict[int, Vector], p: int) -> Vector:
    """Eliminate pivot columns from ``row`` (in place) until its lowest column is free."""
    while row:
        c = min(row)
        prow = pivots.get(c)
        if prow is None:
            return row
        a = row[c]
        if p:
            for k, v in prow.items():
                w = (row.get(k, 0) - a * v) % p
                if w:
                    row[k] = w
                else:
                    del row[k]
        else:
            for k, v in prow.items():
                w = row.get(k, 0) - a * v
                if w:
                    row[k] = _q(w)
                else:
                    del row[k]
    return row


def echelon(rows: Iterable[Vector], field: Field) -> Dict[int, Vector]:
    """Row echelon form: map pivot column -> row with pivot entry 1."""
    p = field.p
    pivots: Dict[int, Vector] = {}
    for r in rows:
        row = _reduce_into(dict(r), pivots, p)
        if row:
            c = min(row)
            inv = field.inv(row[c])
            if p:
                pivots[c] = {k: v * inv % p for k, v in row.items()}
            else:
                pivots[c] = {k: _q(v * inv) for k, v in row.items()}
    return pivots


def rank_of_rows(rows: Iterable[Vector], field: Field) -> int:
    return len(echelon(rows, field))


def nullspace_of_rows(rows: Iterable[Vector], ncols: int, field: Field) -> List[Vector]:
    """Basis of {v : row . v = 0 for every row}; one vector per free column."""
    p = field.p
    piv = echelon(rows, field)
    # back-substitute to reduced form, highest pivot first
    for c in sorted(piv, reverse=True):
        row = piv[c]
        # rows for larger pivots are already reduced, so one pass suffices
        for k in [k for k in row if k != c and k in piv]:
            a = row[k]
            for kk, v in piv[k].items():
                w = row.get(kk, 0) - a * v
                w = w % p if p else _q(w)
                if w:
                    row[kk] = w
                else:
                    row.pop(kk, None)
    basis = []
    for f in range(ncols):
        if f in piv:
            continue
        v = {f: 1}
        for c, row in piv.items():
            a = row.get(f)
            if a:
                v[c] = (-a) % p if p else -a
        basis.append(v)
    return basis


class Matrix:
    """Sparse matrix over a field, stored by rows."""

    __slots__ = ("field", "nrows", "ncols", "rows")

    def __init__(self, field: Field, nrows: int, ncols: int, rows: List[Vector] | None = None):
        self.field, self.nrows, self.ncols = field, nrows, ncols
        self.rows = rows if rows is not None else [dict() for _ in range(nrows)]

    @classmethod
    def from_dense(cls, field: Field, data) -> "Matrix":
        data = [list(r) for r in data]
        nrows = len(data)
        ncols = len(data[0]) if data else 0
        rows = []
        for r in data:
            if len(r) != ncols:
                raise ContextError("ragged matrix")
            rows.append({j: field(v) for j, v in enumerate(r) if field(v)})
        return cls(field, nrows, ncols, rows)

    @classmethod
    def from_columns(cls, field: Field, nrows: int, cols: List[Vector]) -> "Matrix":
        rows: List[Vector] = [dict() for _ in range(nrows)]
        for j, col in enumerate(cols):
            for i, v in col.items():
                rows[i][j] = v
        return cls(field, nrows, len(cols), rows)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def to_dense(self):
        return [[r.get(j, 0) for j in range(self.ncols)] for r in self.rows]

    def transpose(self) -> "Matrix":
        cols: List[Vector] = [dict() for _ in range(self.ncols)]
        for i, r in enumerate(self.rows):
            for j, v in r.items():
                cols[j][i] = v
        return Matrix(self.field, self.ncols, self.nrows, cols)

    def columns(self) -> List[Vector]:
        return self.transpose().rows

    def is_zero(self) -> bool:
        return not any(self.rows)

    def rank(self) -> int:
        # eliminate along the shorter side
        if self.nrows <= self.ncols:
            return rank_of_rows(self.rows, self.field)
        return rank_of_rows(self.columns(), self.field)

    def nullspace(self) -> List[Vector]:
        return nullspace_of_rows(self.rows, self.ncols, self.field)

    def apply(self, v: Vector) -> Vector:
        p = self.field.p
        out: Vector = {}
        for i, r in enumerate(self.rows):
            s = 0
            for j, a in r.items():
                b = v.get(j)
                if b:
                    s += a * b
            s = s % p if p else _q(s)
            if s:
                out[i] = s
        return out

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ContextError(f"shape mismatch {self.shape} @ {other.shape}")
        p = self.field.p
        rows = []
        for r in self.rows:
            acc: Vector = {}
            for k, a in r.items():
                for j, b in other.rows[k].items():
                    acc[j] = acc.get(j, 0) + a * b
            rows.append({j: (v % p if p else _q(v)) for j, v in acc.items() if (v % p if p else v)})
        return Matrix(self.field, self.nrows, other.ncols, rows)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __repr__(self):
        return f"Matrix({self.nrows}x{self.ncols}, {self.to_dense()})"


def span_rank(vectors: Iterable[Vector], field: Field) -> int:
    return rank_of_rows(vectors, field)


__all__ = ["Matrix", "echelon", "rank_of_rows", "nullspace_of_rows", "span_rank"]
