"""Symmetric, exterior and divided powers of free modules and maps.

Canonical bases (all enumerated lexicographically):

* ``S^n``: multisets of generator positions, as sorted tuples,
* ``∧^n``: strictly increasing tuples,
* ``Γ^n``: multisets, read as divided monomials x^(α).

Contraction convention: for a basis vector w_S and dual basis covector w_K^*,
write w_S = ε · w_K ∧ w_{S∖K}; then ``w_S ⌟ w_K^* = ε · w_{S∖K}`` (zero if K ⊄ S).
So (e1∧e2) ⌟ e1^* = e2 and (e1∧e2) ⌟ e2^* = -e1.
"""

from __future__ import annotations

import math
from bisect import insort
from dataclasses import dataclass
from itertools import combinations, combinations_with_replacement
from typing import Dict, List, Sequence, Tuple

from .arith import Polynomial, PolynomialRing
from .errors import PreconditionError
from .groebner import det_polys
from .homalg import GradedFreeModule, GradedMap

Index = Tuple[int, ...]


@dataclass(frozen=True)
class MultilinearBasisIndex:
    kind: str  # "sym", "ext" or "div"
    index: Index

    def __post_init__(self):
        if self.kind not in ("sym", "ext", "div"):
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if any(a > b for a, b in zip(self.index, self.index[1:])):
            raise ValueError("indices must be sorted")
        if self.kind == "ext" and len(set(self.index)) != len(self.index):
            raise ValueError("exterior indices must be distinct")


def sym_basis(r: int, n: int) -> List[Index]:
    return list(combinations_with_replacement(range(r), n)) if n >= 0 else []


def ext_basis(r: int, n: int) -> List[Index]:
    return list(combinations(range(r), n)) if n >= 0 else []


div_basis = sym_basis


def multiplicities(ms: Index, r: int) -> Tuple[int, ...]:
    out = [0] * r
    for a in ms:
        out[a] += 1
    return tuple(out)


def _sum_degrees(M: GradedFreeModule, idx: Index) -> int:
    return sum(M.degrees[a] for a in idx)


def sym_module(M: GradedFreeModule, n: int) -> GradedFreeModule:
    B = sym_basis(M.rank, n)
    return GradedFreeModule(M.ring, [_sum_degrees(M, b) for b in B], B)


def ext_module(M: GradedFreeModule, n: int) -> GradedFreeModule:
    B = ext_basis(M.rank, n)
    return GradedFreeModule(M.ring, [_sum_degrees(M, b) for b in B], B)


def div_module(M: GradedFreeModule, n: int) -> GradedFreeModule:
    return sym_module(M, n)


def expand_product(ring: PolynomialRing, columns: Sequence[Sequence[Polynomial]]) -> Dict[Index, Polynomial]:
    """Expand ∏_k (Σ_t columns[k][t] e_t) in the symmetric algebra; keys are sorted multisets."""
    state: Dict[Index, Polynomial] = {(): ring.one}
    for col in columns:
        new: Dict[Index, Polynomial] = {}
        for ms, c in state.items():
            for t, a in enumerate(col):
                if not a:
                    continue
                key = list(ms)
                insort(key, t)
                key = tuple(key)
                v = c * a
                new[key] = new[key] + v if key in new else v
        state = {k: v for k, v in new.items() if v}
    return state


def sym_power(f: GradedMap, n: int) -> GradedMap:
    """S^n(f): S^n(source) -> S^n(target)."""
    if n < 0:
        raise PreconditionError("power must be nonnegative")
    src, tgt = sym_module(f.source, n), sym_module(f.target, n)
    R = f.ring
    tidx = {b: i for i, b in enumerate(tgt.labels)}
    ents = [[R.zero] * src.rank for _ in range(tgt.rank)]
    cols = [f.column(j) for j in range(f.source.rank)]
    for j, alpha in enumerate(src.labels):
        for ms, c in expand_product(R, [cols[a] for a in alpha]).items():
            ents[tidx[ms]][j] = c
    return GradedMap(src, tgt, ents)


def ext_power(f: GradedMap, n: int) -> GradedMap:
    """∧^n(f); the (J, I) entry is the minor on rows J and columns I."""
    if n < 0:
        raise PreconditionError("power must be nonnegative")
    src, tgt = ext_module(f.source, n), ext_module(f.target, n)
    R = f.ring
    E = f.entries
    ents = []
    for J in tgt.labels:
        ents.append([det_polys([[E[j][i] for i in I] for j in J], R) for I in src.labels])
    return GradedMap(src, tgt, ents)


def div_power(f: GradedMap, n: int) -> GradedMap:
    """Γ^n(f), via Γ^n(M) = S^n(M^∨)^∨ on free modules."""
    t = sym_power(f.transpose(), n).transpose()
    src, tgt = div_module(f.source, n), div_module(f.target, n)
    return GradedMap(src, tgt, t.entries)


def determinant(f: GradedMap) -> Polynomial:
    if f.source.rank != f.target.rank:
        raise PreconditionError("determinant of a non-square map")
    return det_polys(f.entries, f.ring)


def sym_to_div(M: GradedFreeModule, n: int) -> GradedMap:
    """Comparison S^n M -> Γ^n M, e^α ↦ α! x^(α). Invertible iff n! is a unit."""
    S, G = sym_module(M, n), div_module(M, n)
    R = M.ring
    ents = [[R.zero] * S.rank for _ in range(G.rank)]
    for j, ms in enumerate(S.labels):
        coef = 1
        for k in multiplicities(ms, M.rank):
            coef *= math.factorial(k)
        ents[j][j] = R.constant(coef)
    return GradedMap(S, G, ents)


# ---------------------------------------------------------------------------
# exterior algebra elements: dicts {increasing tuple: coefficient}

def merge_sign(K: Index, L: Index) -> int:
    """Sign ε with w_K ∧ w_L = ε w_{sorted(K ∪ L)} (0 if they overlap)."""
    if set(K) & set(L):
        return 0
    inv = sum(1 for k in K for l in L if l < k)
    return -1 if inv % 2 else 1


def wedge(a: Dict[Index, object], b: Dict[Index, object]) -> Dict[Index, object]:
    out: Dict[Index, object] = {}
    for K, x in a.items():
        for L, y in b.items():
            s = merge_sign(K, L)
            if s:
                key = tuple(sorted(K + L))
                v = x * y if s > 0 else -(x * y)
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


def interior_product(a: Dict[Index, object], phi: Dict[Index, object]) -> Dict[Index, object]:
    """Contraction a ⌟ φ of a ∈ ∧^s W by φ ∈ ∧^t W^∨ (see module docstring for signs)."""
    s = {len(K) for K in a}
    t = {len(K) for K in phi}
    if len(s) > 1 or len(t) > 1:
        raise PreconditionError("arguments must be homogeneous in exterior degree")
    if s and t and t.pop() > s.pop():
        raise PreconditionError("contraction degree exceeds element degree")
    out: Dict[Index, object] = {}
    for S, x in a.items():
        Sset = set(S)
        for K, y in phi.items():
            if not set(K) <= Sset:
                continue
            rest = tuple(v for v in S if v not in K)
            sign = merge_sign(K, rest)
            v = x * y if sign > 0 else -(x * y)
            out[rest] = out[rest] + v if rest in out else v
    return {k: v for k, v in out.items() if v}


# ---------------------------------------------------------------------------
# filtrations of powers of a split sum M' ⊕ M''

@dataclass
class Filtration:
    kind: str                     # "sym", "ext" or "div"
    n: int
    rank_sub: int                 # rank of M'
    rank_quot: int                # rank of M''
    basis: List[Index]            # canonical basis of the n-th power of M
    steps: List[List[int]]        # steps[i] = basis positions spanning the i-th piece
    quotient_ranks: List[int]
    quotient_isos_ok: bool

    def ranks(self) -> List[int]:
        return [len(s) for s in self.steps]


def _product_coeff(kind: str, a: Index, b: Index) -> Tuple[Index, int]:
    """Product of basis elements a (in M') and b (in M'') inside the power of M."""
    key = tuple(sorted(a + b))
    if kind == "ext":
        return key, merge_sign(a, b)
    return key, 1  # disjoint supports: no binomial factors for divided powers


def power_filtration(kind: str, n: int, r1: int, r2: int) -> Filtration:
    """Filtration of S^n, ∧^n or Γ^n of M' ⊕ M'' (ranks r1, r2).

    Piece i is spanned by basis elements with at most i factors from M''
    (generator positions >= r1). The i-th successive quotient is identified with
    P^{n-i}M' ⊗ P^i M'' through multiplication, which is checked to send the
    tensor basis bijectively, with coefficient ±1, onto the new basis elements.
    """
    enum = ext_basis if kind == "ext" else sym_basis
    r = r1 + r2
    basis = enum(r, n)
    pos = {b: k for k, b in enumerate(basis)}

    def count_quot(b):
        return sum(1 for v in b if v >= r1)

    steps, qranks, ok = [], [], True
    for i in range(n + 1):
        steps.append([k for k, b in enumerate(basis) if count_quot(b) <= i])
        new = {k for k, b in enumerate(basis) if count_quot(b) == i}
        hit = {}
        for a in enum(r1, n - i):
            for b0 in enum(r2, i):
                b = tuple(v + r1 for v in b0)
                key, c = _product_coeff(kind, a, b)
                if c not in (1, -1) or pos[key] not in new or pos[key] in hit:
                    ok = False
                hit[pos[key]] = c
        if set(hit) != new:
            ok = False
        qranks.append(len(hit))
    return Filtration(kind, n, r1, r2, basis, steps, qranks, ok)


def sym_filtration(n: int, r1: int, r2: int) -> Filtration:
    return power_filtration("sym", n, r1, r2)


__all__ = [
    "MultilinearBasisIndex", "sym_basis", "ext_basis", "div_basis", "sym_module", "ext_module",
    "div_module", "sym_power", "ext_power", "div_power", "determinant", "sym_to_div", "wedge",
    "interior_product", "merge_sign", "expand_product", "power_filtration", "sym_filtration",
    "Filtration", "multiplicities",
]
