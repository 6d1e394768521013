"""Truncated simplicial modules: Dold–Kan, simplicial Sym and simplicial Koszul objects.

Face and degeneracy maps are stored sparsely (one dict per source basis vector)
because they are nearly permutation-like and levels grow quickly.

Normalization is the quotient by the span of degenerate basis vectors, with
differential Σ (-1)^i d_i. This is isomorphic to the Moore complex
(∩_{i>0} ker d_i, d_0); :func:`moore_homology_dims` computes the latter
directly and serves as a cross-check.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import Polynomial, PolynomialRing, monomial_index, monomials_of_degree
from .errors import ContextError, InternalConsistencyError, PreconditionError
from .homalg import ChainComplex, GradedFreeModule, GradedMap, HomologyTable, homology_dims
from .koszul import TwoTermData
from .linalg import Matrix, nullspace_of_rows, rank_of_rows
from .multilinear import expand_product, sym_basis


class SparseMap:
    """Map of graded free modules stored by columns: ``cols[j] = {row: coeff}``."""

    __slots__ = ("source", "target", "cols")

    def __init__(self, source: GradedFreeModule, target: GradedFreeModule, cols: List[Dict[int, Polynomial]]):
        if len(cols) != source.rank:
            raise ContextError("column count differs from source rank")
        self.source, self.target = source, target
        self.cols = [{i: c for i, c in col.items() if c} for col in cols]

    def __matmul__(self, other: "SparseMap") -> "SparseMap":
        if other.target.rank != self.source.rank:
            raise ContextError("maps are not composable")
        cols = []
        for col in other.cols:
            acc: Dict[int, Polynomial] = {}
            for k, a in col.items():
                for i, b in self.cols[k].items():
                    v = b * a
                    acc[i] = acc[i] + v if i in acc else v
            cols.append(acc)
        return SparseMap(other.source, self.target, cols)

    def __eq__(self, other):
        return (isinstance(other, SparseMap) and self.source == other.source
                and self.target == other.target and self.cols == other.cols)

    @classmethod
    def identity(cls, M: GradedFreeModule) -> "SparseMap":
        return cls(M, M, [{j: M.ring.one} for j in range(M.rank)])

    def to_graded_map(self) -> GradedMap:
        R = self.source.ring
        ents = [[R.zero] * self.source.rank for _ in range(self.target.rank)]
        for j, col in enumerate(self.cols):
            for i, c in col.items():
                ents[i][j] = c
        return GradedMap(self.source, self.target, ents)

    def graded_piece(self, e: int) -> Matrix:
        R = self.source.ring
        nv, field = R.nvars, R.field
        p = field.p
        so, to = self.source.piece_offsets(e), self.target.piece_offsets(e)
        rows: List[dict] = [dict() for _ in range(to[-1])]
        for j, col in enumerate(self.cols):
            us = monomials_of_degree(nv, e - self.source.degrees[j])
            if not us:
                continue
            for i, a in col.items():
                idx = monomial_index(nv, e - self.target.degrees[i])
                for m, c in a.terms.items():
                    for t, u in enumerate(us):
                        key = tuple([x + y for x, y in zip(m, u)])
                        row = rows[to[i] + idx[key]]
                        cc = so[j] + t
                        v = row.get(cc, 0) + c
                        if p:
                            v %= p
                        if v:
                            row[cc] = v
                        else:
                            row.pop(cc, None)
        return Matrix(field, to[-1], so[-1], rows)


@dataclass(frozen=True)
class SimplicialDegreeWindow:
    D: int  # symmetric-degree bound
    E: int  # internal-degree bound
    N: int  # level bound


@dataclass
class IdentityCheck:
    ok: bool
    failures: List[str]

    def __bool__(self):
        return self.ok


class TruncatedSimplicialModule:
    """Levels 0..N with faces d_i: X_n -> X_{n-1} and degeneracies s_i: X_n -> X_{n+1}."""

    def __init__(self, levels: Sequence[GradedFreeModule], faces: Dict[Tuple[int, int], SparseMap],
                 degens: Dict[Tuple[int, int], SparseMap], name: str = "", valid_up_to: Optional[int] = None,
                 window: Optional[SimplicialDegreeWindow] = None):
        self.levels = list(levels)
        self.N = len(self.levels) - 1
        self.faces, self.degens = faces, degens
        self.name = name
        self.valid_up_to = self.N - 1 if valid_up_to is None else valid_up_to
        self.window = window
        for n in range(1, self.N + 1):
            for i in range(n + 1):
                if (n, i) not in faces:
                    raise ContextError(f"missing face d_{i} at level {n}")
        for n in range(self.N):
            for i in range(n + 1):
                if (n, i) not in degens:
                    raise ContextError(f"missing degeneracy s_{i} at level {n}")

    @property
    def ring(self) -> PolynomialRing:
        return self.levels[0].ring

    def face(self, n: int, i: int) -> SparseMap:
        return self.faces[(n, i)]

    def degen(self, n: int, i: int) -> SparseMap:
        return self.degens[(n, i)]

    def level_ranks(self) -> List[int]:
        return [M.rank for M in self.levels]

    def check_identities(self) -> IdentityCheck:
        """All simplicial identities among maps whose levels stay within 0..N."""
        N, fail = self.N, []
        d, s = self.face, self.degen
        for n in range(2, N + 1):
            for j in range(1, n + 1):
                for i in range(j):
                    if d(n - 1, i) @ d(n, j) != d(n - 1, j - 1) @ d(n, i):
                        fail.append(f"d{i} d{j} at level {n}")
        for n in range(0, N):
            for j in range(n + 1):
                ident = SparseMap.identity(self.levels[n])
                for i in range(n + 2):
                    lhs = d(n + 1, i) @ s(n, j)
                    if i < j:
                        rhs = s(n - 1, j - 1) @ d(n, i)
                    elif i in (j, j + 1):
                        rhs = ident
                    else:
                        rhs = s(n - 1, j) @ d(n, i - 1)
                    if lhs != rhs:
                        fail.append(f"d{i} s{j} at level {n}")
        for n in range(0, N - 1):
            for j in range(n + 1):
                for i in range(j + 1):
                    if s(n + 1, i) @ s(n, j) != s(n + 1, j + 1) @ s(n, i):
                        fail.append(f"s{i} s{j} at level {n}")
        return IdentityCheck(not fail, fail)

    def to_json(self, elide_above: int = 64) -> dict:
        def enc(f: SparseMap):
            if max(f.source.rank, f.target.rank) > elide_above:
                return "elided"
            return {str(j): {str(i): str(c) for i, c in sorted(col.items())} for j, col in enumerate(f.cols) if col}
        return {
            "name": self.name,
            "level_ranks": self.level_ranks(),
            "valid_up_to": self.valid_up_to,
            "faces": {f"{n},{i}": enc(f) for (n, i), f in sorted(self.faces.items())},
            "degeneracies": {f"{n},{i}": enc(f) for (n, i), f in sorted(self.degens.items())},
        }


# ---------------------------------------------------------------------------
# generic builder from basis-level rules

def _build(ring, bases: List[List[tuple]], degree, face_rule, degen_rule, name, valid_up_to=None, window=None):
    """Assemble a simplicial module whose maps send basis vectors to combinations of basis vectors.

    ``face_rule(n, i, b)`` and ``degen_rule(n, i, b)`` return lists of (target basis element, coeff).
    """
    levels = [GradedFreeModule(ring, [degree(b) for b in B], B) for B in bases]
    index = [{b: k for k, b in enumerate(B)} for B in bases]
    N = len(bases) - 1

    def make(n_src, n_tgt, rule, i):
        cols = []
        for b in bases[n_src]:
            col: Dict[int, Polynomial] = {}
            for tb, c in rule(n_src, i, b):
                k = index[n_tgt].get(tb)
                if k is None:
                    raise InternalConsistencyError(f"{name}: image {tb} leaves the window")
                col[k] = col[k] + c if k in col else c
            cols.append(col)
        return SparseMap(levels[n_src], levels[n_tgt], cols)

    faces = {(n, i): make(n, n - 1, face_rule, i) for n in range(1, N + 1) for i in range(n + 1)}
    degens = {(n, i): make(n, n + 1, degen_rule, i) for n in range(N) for i in range(n + 1)}
    return TruncatedSimplicialModule(levels, faces, degens, name, valid_up_to, window)


# ---------------------------------------------------------------------------
# Dold–Kan

def surjections(n: int, k: int) -> List[Tuple[int, ...]]:
    """Monotone surjections [n] -> [k] as value tuples (η(0), …, η(n))."""
    out = []
    for jumps in combinations(range(1, n + 1), k):
        js = set(jumps)
        v, eta = 0, []
        for i in range(n + 1):
            if i in js:
                v += 1
            eta.append(v)
        out.append(tuple(eta))
    return out


def coface(n: int, i: int) -> Tuple[int, ...]:
    """δ_i: [n-1] -> [n], skipping i."""
    return tuple(j if j < i else j + 1 for j in range(n))


def codegeneracy(n: int, i: int) -> Tuple[int, ...]:
    """σ_i: [n+1] -> [n], hitting i twice."""
    return tuple(j if j <= i else j - 1 for j in range(n + 2))


def dold_kan(P: ChainComplex, N: int) -> TruncatedSimplicialModule:
    """DK(P) truncated at level N: level n = ⊕_{[n]↠[k]} P_k."""
    if P.support and (P.support[0] < 0 or P.support[-1] > N):
        raise PreconditionError(f"complex must be supported in [0, {N}]")
    R = P.ring
    bases = []
    for n in range(N + 1):
        B = []
        for k in range(0, n + 1):
            Mk = P.term(k)
            for eta in surjections(n, k):
                for j in range(Mk.rank):
                    B.append((eta, j))
        bases.append(B)

    def degree(b):
        eta, j = b
        return P.term(eta[-1]).degrees[j]

    def act(theta, b):
        eta, j = b
        k = eta[-1]
        psi = [eta[t] for t in theta]
        S = sorted(set(psi))
        eta2 = tuple(S.index(v) for v in psi)
        if S == list(range(k + 1)):
            return [((eta2, j), R.one)]
        if S == list(range(1, k + 1)):
            d = P.diff(k)
            return [((eta2, i), d.entries[i][j]) for i in range(d.target.rank) if d.entries[i][j]]
        return []

    return _build(R, bases, degree,
                  lambda n, i, b: act(coface(n, i), b),
                  lambda n, i, b: act(codegeneracy(n, i), b),
                  "DK", valid_up_to=N)


# ---------------------------------------------------------------------------
# normalization

def nondegenerate_indices(S: TruncatedSimplicialModule, n: int) -> List[int]:
    hit = set()
    if n >= 1:
        for i in range(n):
            for col in S.degen(n - 1, i).cols:
                if len(col) != 1 or next(iter(col.values())) != S.ring.one:
                    raise PreconditionError("degeneracies must send basis vectors to basis vectors")
                hit.add(next(iter(col)))
    return [k for k in range(S.levels[n].rank) if k not in hit]


def normalize(S: TruncatedSimplicialModule) -> ChainComplex:
    """Normalized chains: nondegenerate basis vectors, differential Σ (-1)^i d_i."""
    R = S.ring
    keep = [nondegenerate_indices(S, n) for n in range(S.N + 1)]
    terms = {}
    for n in range(S.N + 1):
        M = S.levels[n]
        terms[n] = GradedFreeModule(R, [M.degrees[k] for k in keep[n]], [M.labels[k] for k in keep[n]])
    diffs = {}
    for n in range(1, S.N + 1):
        pos = {k: t for t, k in enumerate(keep[n - 1])}
        ents = [[R.zero] * len(keep[n]) for _ in keep[n - 1]]
        for i in range(n + 1):
            f = S.face(n, i)
            for c, k in enumerate(keep[n]):
                for row, a in f.cols[k].items():
                    t = pos.get(row)
                    if t is not None:
                        ents[t][c] = ents[t][c] + (a if i % 2 == 0 else -a)
        diffs[n] = GradedMap(terms[n], terms[n - 1], ents)
    return ChainComplex(R, terms, diffs, f"N({S.name})")


def homotopy_dims(S: TruncatedSimplicialModule, E: int, e_min: Optional[int] = None) -> HomologyTable:
    """π_* of S per internal degree <= E, restricted to the valid homological range."""
    C = normalize(S)
    H = homology_dims(C, E, e_min=e_min if e_min is not None else min(C.min_generator_degree(), 0))
    H = H.restrict(S.valid_up_to)
    H.valid_up_to = S.valid_up_to
    return H


def moore_homology_dims(S: TruncatedSimplicialModule, E: int, e_min: int = 0) -> HomologyTable:
    """Homology of the Moore complex ∩_{i>0} ker d_i with differential d_0."""
    field = S.ring.field
    ent = {}
    for e in range(e_min, E + 1):
        K, d0 = {}, {}
        for n in range(S.N + 1):
            dim = S.levels[n].piece_dim(e)
            if n == 0:
                K[n] = [{k: 1} for k in range(dim)]
                continue
            rows = []
            for i in range(1, n + 1):
                rows.extend(S.face(n, i).graded_piece(e).rows)
            K[n] = nullspace_of_rows(rows, dim, field) if rows else [{k: 1} for k in range(dim)]
            d0[n] = S.face(n, 0).graded_piece(e)
        for n in range(0, S.valid_up_to + 1):
            bnd = [d0[n + 1].apply(v) for v in K[n + 1]] if n + 1 in d0 else []
            # cycles are the kernel of d_0 restricted to K_n
            rk0 = rank_of_rows([d0[n].apply(v) for v in K[n]], field) if n in d0 else 0
            ent[(n, e)] = len(K[n]) - rk0 - rank_of_rows(bnd, field)
    return HomologyTable(ent, E, e_min, S.valid_up_to, (0, S.valid_up_to))


# ---------------------------------------------------------------------------
# simplicial symmetric powers

def _compositions(total: int, parts: int):
    if parts == 1:
        yield (total,)
        return
    for a in range(total + 1):
        for rest in _compositions(total - a, parts - 1):
            yield (a,) + rest


def simplicial_sym(data: TwoTermData, d: int, N: int) -> TruncatedSimplicialModule:
    """Degree-d part of Sym_Δ(ρ), levels S(M) ⊗ S(M')^{⊗n}, truncated at level N.

    Faces: d_0 applies S(ρ) to the first M'-slot and multiplies into S(M); inner
    faces multiply neighbouring slots; d_n applies the augmentation S(0) to the
    last slot. Degeneracies insert 1.
    """
    R = data.ring
    m, nM = data.m, data.n
    W, V = data.source, data.target
    cols = [data.sigma.column(j) for j in range(m)]
    image_cache: Dict[Tuple[int, ...], Dict[Tuple[int, ...], Polynomial]] = {}

    def S_rho(mu):
        if mu not in image_cache:
            image_cache[mu] = expand_product(R, [cols[a] for a in mu])
        return image_cache[mu]

    bases = []
    for n in range(N + 1):
        B = []
        for comp in _compositions(d, n + 1):
            pieces = [sym_basis(nM, comp[0])] + [sym_basis(m, c) for c in comp[1:]]
            B.extend(_products(pieces))
        bases.append(sorted(B))

    def degree(b):
        return sum(V.degrees[a] for a in b[0]) + sum(W.degrees[a] for g in b[1:] for a in g)

    def merge(a, b):
        return tuple(sorted(a + b))

    def face(n, i, b):
        if i == 0:
            out = []
            for nu, c in S_rho(b[1]).items():
                out.append(((merge(b[0], nu),) + b[2:], c))
            return out
        if i == n:
            return [(b[:-1], R.one)] if not b[-1] else []
        return [(b[:i] + (merge(b[i], b[i + 1]),) + b[i + 2:], R.one)]

    def degen(n, i, b):
        return [(b[:i + 1] + ((),) + b[i + 1:], R.one)]

    valid = N if N >= d + 1 else N - 1
    return _build(R, bases, degree, face, degen, f"Sym_Delta^{d}", valid_up_to=valid)


def _products(pieces):
    if not pieces:
        yield ()
        return
    for a in pieces[0]:
        for rest in _products(pieces[1:]):
            yield (a,) + rest


# ---------------------------------------------------------------------------
# simplicial Koszul algebras

def simplicial_koszul(ring: PolynomialRing, r: Sequence, window: SimplicialDegreeWindow) -> TruncatedSimplicialModule:
    """Kos_Δ(r): level n = S(R^m)^{⊗n} cut to total X-degree <= D.

    d_0 evaluates the first slot at r, inner faces multiply, d_n is the
    augmentation X ↦ 0 on the last slot. The X-degree cut is closed under all
    maps; this is asserted while building. Homotopy is valid up to min(N, D) - 1.
    """
    polys = [ring(a) for a in r]
    m = len(polys)
    weights = []
    for p in polys:
        if not p:
            weights.append(1)
            continue
        h = p.homogeneous_degree()
        if h is None:
            raise PreconditionError(f"{p} is not homogeneous")
        weights.append(h)
    D, N = window.D, window.N
    monos = [mm for k in range(D + 1) for mm in monomials_of_degree(m, k)] if m else [()]
    zero = (0,) * m
    bases = []
    for n in range(N + 1):
        B = [()]
        for _ in range(n):
            B = [b + (g,) for b in B for g in monos if sum(map(sum, b)) + sum(g) <= D]
        bases.append(sorted(B))
    ev_cache: Dict[tuple, Polynomial] = {}

    def ev(g):
        if g not in ev_cache:
            val = ring.one
            for k, a in enumerate(g):
                if a:
                    val = val * polys[k] ** a
            ev_cache[g] = val
        return ev_cache[g]

    def degree(b):
        return sum(a * w for g in b for a, w in zip(g, weights))

    def face(n, i, b):
        if i == 0:
            c = ev(b[0])
            return [(b[1:], c)] if c else []
        if i == n:
            return [(b[:-1], ring.one)] if b[-1] == zero else []
        g = tuple(x + y for x, y in zip(b[i - 1], b[i]))
        return [(b[:i - 1] + (g,) + b[i + 1:], ring.one)]

    def degen(n, i, b):
        return [(b[:i] + (zero,) + b[i:], ring.one)]

    valid = min(N, D) - 1 if m else N
    return _build(ring, bases, degree, face, degen, "Kos_Delta", valid_up_to=valid, window=window)


__all__ = [
    "SparseMap", "SimplicialDegreeWindow", "TruncatedSimplicialModule", "IdentityCheck", "dold_kan",
    "normalize", "homotopy_dims", "moore_homology_dims", "simplicial_sym", "simplicial_koszul",
    "surjections", "coface", "codegeneracy", "nondegenerate_indices",
]
