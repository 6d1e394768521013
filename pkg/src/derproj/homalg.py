"""Graded free modules, homogeneous maps, chain complexes and their homology.

Conventions:

* ``GradedMap.entries[i][j]`` is the coefficient of target generator i in the
  image of source generator j; it is homogeneous of degree
  ``source.degrees[j] - target.degrees[i]`` (or zero).
* Differentials lower homological degree: ``diffs[n]: terms[n] -> terms[n-1]``.
* Homology is reported per internal degree as field dimensions.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .arith import Polynomial, PolynomialRing, monomial_index, monomials_of_degree, poly_sum
from .errors import ContextError, PreconditionError
from .linalg import Matrix, nullspace_of_rows, rank_of_rows


class GradedFreeModule:
    """Free module ⊕ R(-a_i) with generator degrees a_i and optional labels."""

    __slots__ = ("ring", "degrees", "labels")

    def __init__(self, ring: PolynomialRing, degrees: Sequence[int], labels: Optional[Sequence] = None):
        self.ring = ring
        self.degrees = tuple(int(d) for d in degrees)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != len(self.degrees):
                raise ContextError("label count differs from rank")
        self.labels = labels

    @property
    def rank(self) -> int:
        return len(self.degrees)

    def __len__(self):
        return len(self.degrees)

    def __eq__(self, other):
        return isinstance(other, GradedFreeModule) and self.ring == other.ring and self.degrees == other.degrees

    def __hash__(self):
        return hash((self.ring, self.degrees))

    def __repr__(self):
        return f"GradedFreeModule({list(self.degrees)})"

    def twist(self, e: int) -> "GradedFreeModule":
        return GradedFreeModule(self.ring, [d + e for d in self.degrees], self.labels)

    def dual(self) -> "GradedFreeModule":
        labels = None if self.labels is None else tuple(("dual", l) for l in self.labels)
        return GradedFreeModule(self.ring, [-d for d in self.degrees], labels)

    def direct_sum(self, other: "GradedFreeModule") -> "GradedFreeModule":
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = self.labels + other.labels
        return GradedFreeModule(self.ring, self.degrees + other.degrees, labels)

    def tensor(self, other: "GradedFreeModule") -> "GradedFreeModule":
        degs = [a + b for a in self.degrees for b in other.degrees]
        labels = None
        if self.labels is not None and other.labels is not None:
            labels = [(a, b) for a in self.labels for b in other.labels]
        return GradedFreeModule(self.ring, degs, labels)

    def piece_dim(self, e: int) -> int:
        n = self.ring.nvars
        return sum(len(monomials_of_degree(n, e - d)) for d in self.degrees)

    def piece_offsets(self, e: int) -> List[int]:
        n = self.ring.nvars
        offs, tot = [], 0
        for d in self.degrees:
            offs.append(tot)
            tot += len(monomials_of_degree(n, e - d))
        offs.append(tot)
        return offs


class GradedMap:
    """Matrix of polynomials between graded free modules (rows index the target)."""

    __slots__ = ("source", "target", "entries")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, entries):
        ring = source.ring
        if target.ring != ring:
            raise ContextError("source and target live over different rings")
        rows = []
        for r in entries:
            rows.append(tuple(ring(a) for a in r))
        if target.rank == 0:
            rows = []
        if len(rows) != target.rank or any(len(r) != source.rank for r in rows):
            raise ContextError(
                f"matrix shape does not match modules ({target.rank}x{source.rank})")
        self.source, self.target = source, target
        self.entries: Tuple[Tuple[Polynomial, ...], ...] = tuple(rows)

    @property
    def ring(self) -> PolynomialRing:
        return self.source.ring

    @property
    def shape(self):
        return (self.target.rank, self.source.rank)

    @classmethod
    def zero(cls, source: GradedFreeModule, target: GradedFreeModule) -> "GradedMap":
        z = source.ring.zero
        return cls(source, target, [[z] * source.rank for _ in range(target.rank)])

    @classmethod
    def identity(cls, M: GradedFreeModule) -> "GradedMap":
        R = M.ring
        return cls(M, M, [[R.one if i == j else R.zero for j in range(M.rank)] for i in range(M.rank)])

    def __eq__(self, other):
        return (isinstance(other, GradedMap) and self.source == other.source
                and self.target == other.target and self.entries == other.entries)

    def __hash__(self):
        return hash((self.source, self.target, self.entries))

    def __repr__(self):
        return f"GradedMap({[[str(a) for a in r] for r in self.entries]})"

    def column(self, j: int) -> Tuple[Polynomial, ...]:
        return tuple(r[j] for r in self.entries)

    def is_zero(self) -> bool:
        return all(not a for r in self.entries for a in r)

    def is_homogeneous(self) -> bool:
        return self.inhomogeneous_entry() is None

    def inhomogeneous_entry(self):
        """First (i, j) whose entry is not homogeneous of the expected degree."""
        for i, r in enumerate(self.entries):
            for j, a in enumerate(r):
                if not a:
                    continue
                want = self.source.degrees[j] - self.target.degrees[i]
                if any(sum(m) != want for m in a.terms):
                    return (i, j)
        return None

    def __matmul__(self, other: "GradedMap") -> "GradedMap":
        """Composition ``self ∘ other``."""
        if other.target.degrees != self.source.degrees or other.ring != self.ring:
            raise ContextError("maps are not composable")
        R = self.ring
        rows = []
        for r in self.entries:
            row = []
            for j in range(other.source.rank):
                row.append(poly_sum(R, (a * other.entries[k][j] for k, a in enumerate(r) if a and other.entries[k][j])))
            rows.append(row)
        return GradedMap(other.source, self.target, rows)

    def __add__(self, other: "GradedMap") -> "GradedMap":
        if self.source != other.source or self.target != other.target:
            raise ContextError("maps have different shapes")
        return GradedMap(self.source, self.target,
                         [[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c) -> "GradedMap":
        return GradedMap(self.source, self.target, [[a.scale(c) for a in r] for r in self.entries])

    def transpose(self) -> "GradedMap":
        """Dual map target^∨ -> source^∨ (plain transpose, no sign)."""
        ents = [[self.entries[i][j] for i in range(self.target.rank)] for j in range(self.source.rank)]
        return GradedMap(self.target.dual(), self.source.dual(), ents)

    dual = transpose

    def tensor(self, other: "GradedMap") -> "GradedMap":
        """Kronecker product, bases ordered (i, k) row-major."""
        src = self.source.tensor(other.source)
        tgt = self.target.tensor(other.target)
        rows = []
        for r in self.entries:
            for s in other.entries:
                rows.append([a * b if a and b else self.ring.zero for a in r for b in s])
        return GradedMap(src, tgt, rows)

    def evaluate(self, values: Dict[str, object], ring: Optional[PolynomialRing] = None) -> "GradedMap":
        """Substitute values for variables; optionally move to a new ring with the same names."""
        R = ring or self.ring
        src = GradedFreeModule(R, self.source.degrees, self.source.labels)
        tgt = GradedFreeModule(R, self.target.degrees, self.target.labels)
        ents = []
        for r in self.entries:
            row = []
            for a in r:
                b = a.evaluate(values) if values else a
                row.append(b.change_ring(R) if R != self.ring else b)
            ents.append(row)
        return GradedMap(src, tgt, ents)

    def to_strings(self) -> List[List[str]]:
        return [[str(a) for a in r] for r in self.entries]


def zero_module(ring: PolynomialRing) -> GradedFreeModule:
    return GradedFreeModule(ring, [])


# ---------------------------------------------------------------------------
# graded pieces

def graded_piece(f: GradedMap, e: int) -> Matrix:
    """Matrix of f on internal degree e, in the monomial bases of both pieces.

    Source basis: pairs (generator j, monomial u) with deg u = e - deg_j, ordered by
    j then by :func:`monomials_of_degree`; likewise for the target.
    """
    R = f.ring
    nv = R.nvars
    field = R.field
    p = field.p
    src_off = f.source.piece_offsets(e)
    tgt_off = f.target.piece_offsets(e)
    nrows, ncols = tgt_off[-1], src_off[-1]
    rows: List[dict] = [dict() for _ in range(nrows)]
    tdeg = f.target.degrees
    for j, dj in enumerate(f.source.degrees):
        us = monomials_of_degree(nv, e - dj)
        if not us:
            continue
        for i, a in enumerate(r[j] for r in f.entries):
            if not a:
                continue
            k = e - tdeg[i]
            idx = monomial_index(nv, k)
            base = tgt_off[i]
            for m, c in a.terms.items():
                if sum(m) != dj - tdeg[i]:
                    raise PreconditionError(f"entry ({i},{j}) is not homogeneous of degree {dj - tdeg[i]}")
                for t, u in enumerate(us):
                    row = rows[base + idx[tuple([x + y for x, y in zip(m, u)])]]
                    col = src_off[j] + t
                    v = row.get(col, 0) + c
                    if p:
                        v %= p
                    if v:
                        row[col] = v
                    else:
                        row.pop(col, None)
    return Matrix(field, nrows, ncols, rows)


# ---------------------------------------------------------------------------
# chain complexes

class ChainComplex:
    """Bounded complex of graded free modules with homological differentials."""

    def __init__(self, ring: PolynomialRing, terms: Dict[int, GradedFreeModule],
                 diffs: Optional[Dict[int, GradedMap]] = None, name: str = ""):
        self.ring = ring
        self.name = name
        self.terms: Dict[int, GradedFreeModule] = {int(n): M for n, M in terms.items() if M.rank > 0}
        self.diffs: Dict[int, GradedMap] = {}
        for n, d in (diffs or {}).items():
            src, tgt = self.term(n), self.term(n - 1)
            if src.rank == 0 or tgt.rank == 0:
                continue
            if d.source.degrees != src.degrees or d.target.degrees != tgt.degrees:
                raise ContextError(f"differential {n} does not match terms {n}->{n - 1}")
            self.diffs[n] = d

    def term(self, n: int) -> GradedFreeModule:
        return self.terms.get(n) or zero_module(self.ring)

    def diff(self, n: int) -> GradedMap:
        d = self.diffs.get(n)
        if d is None:
            d = GradedMap.zero(self.term(n), self.term(n - 1))
        return d

    @property
    def support(self) -> List[int]:
        return sorted(self.terms)

    def bounds(self) -> Tuple[int, int]:
        s = self.support
        return (s[0], s[-1]) if s else (0, -1)

    def ranks(self) -> Dict[int, int]:
        return {n: M.rank for n, M in sorted(self.terms.items())}

    def is_zero(self) -> bool:
        return not self.terms

    def is_homogeneous(self) -> bool:
        return all(d.is_homogeneous() for d in self.diffs.values())

    def min_generator_degree(self) -> int:
        degs = [d for M in self.terms.values() for d in M.degrees]
        return min(degs) if degs else 0

    def __eq__(self, other):
        if not isinstance(other, ChainComplex) or self.ring != other.ring:
            return False
        if self.support != other.support:
            return False
        if any(self.terms[n] != other.terms[n] for n in self.terms):
            return False
        keys = set(self.diffs) | set(other.diffs)
        return all(self.diff(n) == other.diff(n) for n in keys)

    def __repr__(self):
        return f"ChainComplex({self.name or ''} ranks={self.ranks()})"

    def to_json(self) -> dict:
        terms = {}
        for n, M in sorted(self.terms.items()):
            entry = {"degrees": list(M.degrees)}
            if M.labels is not None:
                entry["labels"] = [_label_str(l) for l in M.labels]
            terms[str(n)] = entry
        diffs = {str(n): d.to_strings() for n, d in sorted(self.diffs.items())}
        return {"name": self.name, "ring": {"field": self.ring.field.spec, "variables": list(self.ring.names)},
                "terms": terms, "diffs": diffs}


def _label_str(l) -> str:
    if isinstance(l, tuple):
        return "(" + ",".join(_label_str(x) for x in l) + ")"
    return str(l)


def complex_from_maps(maps: Sequence[GradedMap], top: int, name: str = "") -> ChainComplex:
    """Complex whose differentials are ``maps[k]: term(top-k) -> term(top-k-1)``."""
    if not maps:
        raise PreconditionError("need at least one map")
    ring = maps[0].ring
    terms = {top: maps[0].source}
    diffs = {}
    for k, f in enumerate(maps):
        n = top - k
        if f.source.degrees != terms[n].degrees:
            raise ContextError(f"map {k} does not start at term {n}")
        terms[n - 1] = f.target
        diffs[n] = f
    return ChainComplex(ring, terms, diffs, name)


@dataclass
class ComplexCheck:
    ok: bool
    failing: Optional[Tuple[int, int]] = None  # (homological, internal) degree
    message: str = ""

    def __bool__(self):
        return self.ok


def check_complex(C: ChainComplex) -> ComplexCheck:
    """Verify d_{n-1} ∘ d_n = 0 symbolically; report the first failing bidegree."""
    for n in sorted(C.diffs):
        if n - 1 not in C.diffs:
            continue
        comp = C.diffs[n - 1] @ C.diffs[n]
        bad = [j for j in range(comp.source.rank) if any(comp.entries[i][j] for i in range(comp.target.rank))]
        if bad:
            e = min(comp.source.degrees[j] for j in bad)
            return ComplexCheck(False, (n, e), f"d_{n - 1} ∘ d_{n} is nonzero")
    return ComplexCheck(True)


# ---------------------------------------------------------------------------
# homology tables

@dataclass
class HomologyTable:
    entries: Dict[Tuple[int, int], int]
    e_max: int
    e_min: int = 0
    valid_up_to: Optional[int] = None  # homological validity bound, if any
    homological: Tuple[int, int] = (0, -1)

    def dim(self, n: int, e: int) -> int:
        return self.entries.get((n, e), 0)

    def row(self, n: int) -> List[int]:
        return [self.dim(n, e) for e in range(self.e_min, self.e_max + 1)]

    def nonzero(self) -> Dict[Tuple[int, int], int]:
        return {k: v for k, v in sorted(self.entries.items()) if v}

    def is_zero(self) -> bool:
        return not self.nonzero()

    def vanishes_except(self, n: int) -> bool:
        return all(k[0] == n for k in self.nonzero())

    def restrict(self, n_max: int) -> "HomologyTable":
        ent = {k: v for k, v in self.entries.items() if k[0] <= n_max}
        lo, hi = self.homological
        return HomologyTable(ent, self.e_max, self.e_min, self.valid_up_to, (lo, min(hi, n_max)))

    def to_json(self) -> dict:
        out = {"H": {f"{n},{e}": v for (n, e), v in sorted(self.entries.items())}, "e_max": self.e_max,
               "e_min": self.e_min}
        if self.valid_up_to is not None:
            out["valid_up_to"] = self.valid_up_to
        return out

    @classmethod
    def from_json(cls, data: dict) -> "HomologyTable":
        ent = {}
        for k, v in data["H"].items():
            n, e = (int(x) for x in k.split(","))
            ent[(n, e)] = int(v)
        ns = [k[0] for k in ent] or [0]
        return cls(ent, int(data["e_max"]), int(data.get("e_min", 0)), data.get("valid_up_to"),
                   (min(ns), max(ns)))

    def to_markdown(self) -> str:
        lo, hi = self.homological
        es = list(range(self.e_min, self.e_max + 1))
        lines = ["| n \\ e | " + " | ".join(str(e) for e in es) + " |",
                 "|---|" + "---|" * len(es)]
        for n in range(hi, lo - 1, -1):
            lines.append(f"| H_{n} | " + " | ".join(str(self.dim(n, e)) for e in es) + " |")
        if self.valid_up_to is not None:
            lines.append(f"\nvalid for homological degree <= {self.valid_up_to}")
        return "\n".join(lines)

    def __eq__(self, other):
        if not isinstance(other, HomologyTable):
            return NotImplemented
        keys = set(self.entries) | set(other.entries)
        return all(self.dim(*k) == other.dim(*k) for k in keys) and self.e_max == other.e_max


class _RankCache:
    """Ranks of graded pieces of a complex's differentials, computed on demand."""

    def __init__(self, C: ChainComplex):
        self.C = C
        self.cache: Dict[Tuple[int, int], int] = {}

    def rank(self, n: int, e: int) -> int:
        key = (n, e)
        if key not in self.cache:
            d = self.C.diffs.get(n)
            self.cache[key] = 0 if d is None else graded_piece(d, e).rank()
        return self.cache[key]


def homology_dims(C: ChainComplex, e_max: int, e_min: Optional[int] = None) -> HomologyTable:
    """dim H_n(C)_e for every n in the support and e_min <= e <= e_max."""
    for n, d in C.diffs.items():
        bad = d.inhomogeneous_entry()
        if bad is not None:
            raise PreconditionError(f"differential {n} has inhomogeneous entry {bad}")
    chk = check_complex(C)
    if not chk:
        raise PreconditionError(f"not a complex: {chk.message} at bidegree {chk.failing}")
    if e_min is None:
        e_min = C.min_generator_degree()
    ranks = _RankCache(C)
    entries = {}
    for n in C.support:
        M = C.terms[n]
        for e in range(e_min, e_max + 1):
            dim = M.piece_dim(e)
            entries[(n, e)] = dim - ranks.rank(n, e) - ranks.rank(n + 1, e) if dim else 0
    lo, hi = C.bounds()
    return HomologyTable(entries, e_max, e_min, None, (lo, hi))


def euler_characteristic_check(C: ChainComplex, table: HomologyTable) -> bool:
    """Σ(-1)^n dim C_{n,e} = Σ(-1)^n dim H_{n,e} for each degree in the table."""
    for e in range(table.e_min, table.e_max + 1):
        lhs = sum((-1) ** (n % 2) * M.piece_dim(e) for n, M in C.terms.items())
        rhs = sum((-1) ** (n % 2) * table.dim(n, e) for n in C.terms)
        if lhs != rhs:
            return False
    return True


# ---------------------------------------------------------------------------
# constructions on complexes

def dual_complex(C: ChainComplex) -> ChainComplex:
    """Termwise dual: term n goes to -n; differential at -n is the transpose of d_{n+1}."""
    terms = {-n: M.dual() for n, M in C.terms.items()}
    diffs = {-n: C.diffs[n + 1].transpose() for n in C.terms if n + 1 in C.diffs}
    return ChainComplex(C.ring, terms, diffs, f"dual({C.name})" if C.name else "")


def shift(C: ChainComplex, k: int) -> ChainComplex:
    """Term n moves to n + k; differentials pick up the sign (-1)^k."""
    terms = {n + k: M for n, M in C.terms.items()}
    diffs = {n + k: (d if k % 2 == 0 else -d) for n, d in C.diffs.items()}
    return ChainComplex(C.ring, terms, diffs, C.name)


def twist(C: ChainComplex, e: int) -> ChainComplex:
    """Shift every generator degree by e (differentials unchanged)."""
    terms = {n: M.twist(e) for n, M in C.terms.items()}
    diffs = {n: GradedMap(d.source.twist(e), d.target.twist(e), d.entries) for n, d in C.diffs.items()}
    return ChainComplex(C.ring, terms, diffs, C.name)


def tensor(C: ChainComplex, D: ChainComplex) -> ChainComplex:
    """Tensor product with the Koszul sign d(x⊗y) = dx⊗y + (-1)^p x⊗dy."""
    R = C.ring
    if D.ring != R:
        raise ContextError("complexes over different rings")
    blocks: Dict[int, List[Tuple[int, int]]] = {}
    for p in C.support:
        for q in D.support:
            blocks.setdefault(p + q, []).append((p, q))
    terms, offsets = {}, {}
    for n, pqs in blocks.items():
        M = zero_module(R)
        off = {}
        for p, q in pqs:
            off[(p, q)] = M.rank
            M = M.direct_sum(C.terms[p].tensor(D.terms[q]))
        terms[n], offsets[n] = M, off
    diffs = {}
    for n, pqs in blocks.items():
        if n - 1 not in terms:
            continue
        src, tgt = terms[n], terms[n - 1]
        ents = [[R.zero] * src.rank for _ in range(tgt.rank)]
        for p, q in pqs:
            A, B = C.terms[p], D.terms[q]
            s0 = offsets[n][(p, q)]
            # dC ⊗ id
            if (p - 1, q) in offsets[n - 1]:
                dc = C.diff(p)
                t0 = offsets[n - 1][(p - 1, q)]
                for i in range(dc.target.rank):
                    for j in range(A.rank):
                        a = dc.entries[i][j]
                        if a:
                            for k in range(B.rank):
                                ents[t0 + i * B.rank + k][s0 + j * B.rank + k] = a
            # (-1)^p id ⊗ dD
            if (p, q - 1) in offsets[n - 1]:
                dd = D.diff(q)
                t0 = offsets[n - 1][(p, q - 1)]
                Bt = dd.target.rank
                for j in range(A.rank):
                    for i in range(Bt):
                        for k in range(B.rank):
                            a = dd.entries[i][k]
                            if a:
                                ents[t0 + j * Bt + i][s0 + j * B.rank + k] = a if p % 2 == 0 else -a
        diffs[n] = GradedMap(src, tgt, ents)
    return ChainComplex(R, terms, diffs)


def single_term(M: GradedFreeModule, n: int = 0) -> ChainComplex:
    return ChainComplex(M.ring, {n: M}, {})


# ---------------------------------------------------------------------------
# brutal truncation and its long exact sequence

@dataclass
class LESReport:
    exact: bool
    per_degree: Dict[int, bool]
    failures: List[str] = dc_field(default_factory=list)

    def to_json(self) -> dict:
        return {"exact": self.exact, "per_degree": {str(e): v for e, v in sorted(self.per_degree.items())},
                "failures": self.failures}


@dataclass
class Truncation:
    complex: ChainComplex
    cut: int
    sub: ChainComplex        # degrees <= cut
    quotient: ChainComplex   # degrees > cut

    def les_exactness(self, e_max: int, e_min: Optional[int] = None) -> LESReport:
        return _les_check(self, e_max, e_min)


def brutal_truncation(C: ChainComplex, i: int) -> Truncation:
    """Split C into the subcomplex of degrees <= i and the quotient of degrees > i."""
    sub = ChainComplex(C.ring, {n: M for n, M in C.terms.items() if n <= i},
                       {n: d for n, d in C.diffs.items() if n <= i}, f"{C.name}[<= {i}]")
    quo = ChainComplex(C.ring, {n: M for n, M in C.terms.items() if n > i},
                       {n: d for n, d in C.diffs.items() if n - 1 > i}, f"{C.name}[> {i}]")
    return Truncation(C, i, sub, quo)


class _Piece:
    """Cycles and boundaries of one complex in one internal degree."""

    def __init__(self, C: ChainComplex, e: int, lo: int, hi: int):
        self.C, self.e = C, e
        self.mats = {n: graded_piece(C.diff(n), e) for n in range(lo, hi + 2)}
        self.dims = {n: C.term(n).piece_dim(e) for n in range(lo - 1, hi + 2)}

    def cycles(self, n: int):
        m = self.mats.get(n)
        if m is None:
            return [{k: 1} for k in range(self.dims.get(n, 0))]
        return nullspace_of_rows(m.rows, m.ncols, m.field)

    def boundaries(self, n: int):
        m = self.mats.get(n + 1)
        if m is None or m.nrows == 0:
            return []
        return m.columns()

    def h(self, n: int) -> int:
        field = self.C.ring.field
        return len(self.cycles(n)) - rank_of_rows(self.boundaries(n), field)


def _map_rank(f: Matrix, Z: list, B_tgt: list, field) -> int:
    """Rank of the map induced on homology by a chain map with matrix f."""
    img = [f.apply(z) for z in Z]
    return rank_of_rows(img + B_tgt, field) - rank_of_rows(B_tgt, field)


def _les_check(T: Truncation, e_max: int, e_min: Optional[int]) -> LESReport:
    C, i = T.complex, T.cut
    field = C.ring.field
    lo, hi = C.bounds()
    if e_min is None:
        e_min = C.min_generator_degree()
    per, failures = {}, []
    for e in range(e_min, e_max + 1):
        PS = _Piece(T.sub, e, lo, hi)
        PC = _Piece(C, e, lo, hi)
        PQ = _Piece(T.quotient, e, lo, hi)
        ok = True
        rk_a, rk_b, rk_d = {}, {}, {}
        for n in range(lo - 1, hi + 2):
            dim = PC.dims.get(n, 0)
            ident = Matrix.from_columns(field, dim, [{k: 1} for k in range(dim)])
            # inclusion S_n -> C_n and projection C_n -> Q_n are identity or zero blocks
            a = ident if n <= i else Matrix(field, dim, dim)
            b = ident if n > i else Matrix(field, dim, dim)
            rk_a[n] = _map_rank(a, PS.cycles(n) if n <= i else [], PC.boundaries(n), field)
            rk_b[n] = _map_rank(b, PC.cycles(n), PQ.boundaries(n) if n > i else [], field)
            # connecting map H_n(Q) -> H_{n-1}(S): lift, apply d of C
            if n == i + 1:
                dC = PC.mats.get(n) or Matrix(field, PC.dims.get(n - 1, 0), dim)
                rk_d[n] = _map_rank(dC, PQ.cycles(n), PS.boundaries(n - 1), field)
                # the composite with the inclusion must vanish on homology
                if _map_rank(dC, PQ.cycles(n), PC.boundaries(n - 1), field) != 0:
                    ok = False
                    failures.append(f"e={e}: inclusion∘connecting nonzero at n={n}")
            else:
                rk_d[n] = 0
        for n in range(lo - 1, hi + 2):
            hS = PS.h(n) if n <= i else 0
            hC = PC.h(n)
            hQ = PQ.h(n) if n > i else 0
            if hS != rk_d.get(n + 1, 0) + rk_a[n]:
                ok = False
                failures.append(f"e={e}: not exact at H_{n}(sub)")
            if hC != rk_a[n] + rk_b[n]:
                ok = False
                failures.append(f"e={e}: not exact at H_{n}(total)")
            if hQ != rk_b[n] + rk_d.get(n, 0):
                ok = False
                failures.append(f"e={e}: not exact at H_{n}(quotient)")
        per[e] = ok
    return LESReport(all(per.values()), per, failures)


# ---------------------------------------------------------------------------
# presented modules

@dataclass
class PresentedModule:
    """coker(presentation: relations -> generators)."""

    presentation: GradedMap

    @property
    def generators(self) -> GradedFreeModule:
        return self.presentation.target

    def graded_dims(self, e_max: int, e_min: Optional[int] = None) -> Dict[int, int]:
        G = self.generators
        if e_min is None:
            e_min = min(G.degrees, default=0)
        out = {}
        for e in range(e_min, e_max + 1):
            dim = G.piece_dim(e)
            out[e] = dim - (graded_piece(self.presentation, e).rank() if dim else 0)
        return out

    def dual_kernel_dims(self, e_max: int, e_min: int) -> Dict[int, int]:
        """Graded dims of ker(presentation^T): the graded dual Hom(coker, R)."""
        t = self.presentation.transpose()
        out = {}
        for e in range(e_min, e_max + 1):
            m = graded_piece(t, e)
            out[e] = m.ncols - m.rank()
        return out


def h0_presentation(C: ChainComplex) -> PresentedModule:
    """H_0 of a complex supported in degrees >= 0, as coker(d_1)."""
    if C.support and C.support[0] < 0:
        raise PreconditionError("complex has terms in negative degrees")
    return PresentedModule(C.diff(1))


def dumps(obj) -> str:
    """Deterministic JSON serialization used for every report."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False)


__all__ = [
    "GradedFreeModule", "GradedMap", "ChainComplex", "HomologyTable", "PresentedModule",
    "Truncation", "LESReport", "ComplexCheck", "graded_piece", "check_complex", "homology_dims",
    "dual_complex", "shift", "twist", "tensor", "brutal_truncation", "h0_presentation",
    "euler_characteristic_check", "complex_from_maps", "single_term", "zero_module", "dumps",
]
