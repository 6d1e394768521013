"""Koszul-type complexes attached to a map of free modules ρ: M' -> M.

* ``koszul_S(ρ, n)``: term i = ∧^i M' ⊗ S^{n-i} M,
  d(x_I ⊗ y) = Σ_j (-1)^(j-1) x_{I∖i_j} ⊗ ρ(x_{i_j}) y.
* ``koszul_wedge(ρ, n)``: term j = Γ^j M' ⊗ ∧^{n-j} M, defined as the n-fold
  shift of the dual of ``koszul_S(ρ^∨, n)``.  The explicit differential
  g ⊗ ε^(ν) ↦ Σ_k (ρ(ε_k) ∧ g) ⊗ ε^(ν-e_k) agrees with it up to the global sign
  (-1)^n; both are built and compared.
* ``eagon_northcott(σ, d)``: the complexes EN_d with the ε-gluing when r <= 0.

Term labels are tuples: ``("S", I, μ)`` for x_I ⊗ y^μ and ``("D", I, μ)`` for the
dual basis vector of that element tensored with (det F)^∨.
"""

from __future__ import annotations

from bisect import insort
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Sequence, Tuple

from .arith import Polynomial, PolynomialRing
from .errors import InternalConsistencyError, PreconditionError
from .homalg import (ChainComplex, GradedFreeModule, GradedMap, HomologyTable, check_complex,
                     complex_from_maps, dual_complex, homology_dims, shift, twist)
from .multilinear import ext_basis, merge_sign, sym_basis


@dataclass(frozen=True)
class TwoTermData:
    """A map σ: M' -> M (columns index M', rows index M)."""

    sigma: GradedMap

    @property
    def ring(self) -> PolynomialRing:
        return self.sigma.ring

    @property
    def source(self) -> GradedFreeModule:
        return self.sigma.source

    @property
    def target(self) -> GradedFreeModule:
        return self.sigma.target

    @property
    def m(self) -> int:
        return self.sigma.source.rank

    @property
    def n(self) -> int:
        return self.sigma.target.rank

    @property
    def r(self) -> int:
        return self.n - self.m

    @property
    def det_degree(self) -> int:
        """Internal degree of det F = det V ⊗ (det W)^∨ in the free presentation."""
        return sum(self.target.degrees) - sum(self.source.degrees)

    def dual(self) -> "TwoTermData":
        return TwoTermData(self.sigma.transpose())


def two_term(ring: PolynomialRing, matrix, source_degrees=None, target_degrees=None) -> TwoTermData:
    """Build TwoTermData from a matrix of polynomials (or strings); degrees default to
    the linear-entry convention: targets at 0, sources at the entries' degree."""
    rows = [[ring(a) for a in r] for r in matrix]
    n = len(rows)
    m = len(rows[0]) if n else 0
    if target_degrees is None:
        target_degrees = [0] * n
    if source_degrees is None:
        source_degrees = []
        for j in range(m):
            ds = {rows[i][j].homogeneous_degree() + target_degrees[i]
                  for i in range(n) if rows[i][j]}
            if len(ds) > 1:
                raise PreconditionError(f"column {j} admits no homogeneous grading")
            source_degrees.append(ds.pop() if ds else 0)
    src = GradedFreeModule(ring, source_degrees)
    tgt = GradedFreeModule(ring, target_degrees)
    return TwoTermData(GradedMap(src, tgt, rows))


# ---------------------------------------------------------------------------
# 𝕊^n

def _koszul_S_module(data: TwoTermData, i: int, n: int, tag: str = "S") -> GradedFreeModule:
    W, V = data.source, data.target
    labels, degs = [], []
    for I in ext_basis(W.rank, i):
        dI = sum(W.degrees[a] for a in I)
        for mu in sym_basis(V.rank, n - i):
            labels.append((tag, I, mu))
            degs.append(dI + sum(V.degrees[b] for b in mu))
    return GradedFreeModule(data.ring, degs, labels)


def koszul_S(data: TwoTermData, n: int) -> ChainComplex:
    """The complex 𝕊^n(ρ) with term i = ∧^i M' ⊗ S^{n-i} M in degree i."""
    if n < 0:
        raise PreconditionError("koszul_S needs n >= 0")
    R = data.ring
    top = min(data.m, n)
    terms = {i: _koszul_S_module(data, i, n) for i in range(top + 1)}
    sig = data.sigma.entries
    diffs = {}
    for i in range(1, top + 1):
        src, tgt = terms[i], terms[i - 1]
        tidx = {l: k for k, l in enumerate(tgt.labels)}
        ents = [[R.zero] * src.rank for _ in range(tgt.rank)]
        for col, (_, I, mu) in enumerate(src.labels):
            for jpos, x in enumerate(I):
                rest = I[:jpos] + I[jpos + 1:]
                for t in range(data.n):
                    a = sig[t][x]
                    if not a:
                        continue
                    nu = list(mu)
                    insort(nu, t)
                    row = tidx[("S", rest, tuple(nu))]
                    v = a if jpos % 2 == 0 else -a
                    ents[row][col] = ents[row][col] + v
        diffs[i] = GradedMap(src, tgt, ents)
    return ChainComplex(R, terms, diffs, f"S^{n}")


# ---------------------------------------------------------------------------
# ⋀^n

def _wedge_module(data: TwoTermData, j: int, n: int) -> GradedFreeModule:
    W, V = data.source, data.target
    labels, degs = [], []
    for nu in sym_basis(W.rank, j):
        dn = sum(W.degrees[a] for a in nu)
        for K in ext_basis(V.rank, n - j):
            labels.append(("G", nu, K))
            degs.append(dn + sum(V.degrees[b] for b in K))
    return GradedFreeModule(data.ring, degs, labels)


def koszul_wedge_explicit(data: TwoTermData, n: int) -> ChainComplex:
    """⋀^n via the explicit divided-power differential (no global sign)."""
    R = data.ring
    terms = {j: _wedge_module(data, j, n) for j in range(max(0, n - data.n), n + 1)}
    terms = {j: M for j, M in terms.items() if M.rank}
    sig = data.sigma.entries
    diffs = {}
    for j in sorted(terms):
        if j - 1 not in terms:
            continue
        src, tgt = terms[j], terms[j - 1]
        tidx = {l: k for k, l in enumerate(tgt.labels)}
        ents = [[R.zero] * src.rank for _ in range(tgt.rank)]
        for col, (_, nu, K) in enumerate(src.labels):
            for k in sorted(set(nu)):
                rest = list(nu)
                rest.remove(k)
                rest = tuple(rest)
                for t in range(data.n):
                    a = sig[t][k]
                    s = merge_sign((t,), K)
                    if not a or not s:
                        continue
                    row = tidx[("G", rest, tuple(sorted(K + (t,))))]
                    ents[row][col] = ents[row][col] + (a if s > 0 else -a)
        diffs[j] = GradedMap(src, tgt, ents)
    return ChainComplex(R, terms, diffs, f"wedge^{n}")


def koszul_wedge(data: TwoTermData, n: int) -> ChainComplex:
    """⋀^n(ρ) = Σ^n (𝕊^n(ρ^∨))^∨, checked against the explicit differential."""
    if n < 0:
        raise PreconditionError("koszul_wedge needs n >= 0")
    D = shift(dual_complex(koszul_S(data.dual(), n)), n)
    # relabel: dual of (x_K ⊗ y^ν) with K ⊂ M^∨, ν over M'^∨  ->  ε^(ν) ⊗ e_K
    terms, diffs = {}, {}
    for j, M in D.terms.items():
        labels = [("G", l[1][2], l[1][1]) for l in M.labels]
        terms[j] = GradedFreeModule(M.ring, M.degrees, labels)
    perm = {}
    explicit = koszul_wedge_explicit(data, n)
    if sorted(terms) != explicit.support:
        raise InternalConsistencyError(f"wedge^{n}: supports differ between constructions")
    for j, M in terms.items():
        E = explicit.term(j)
        if E.labels is None or sorted(E.labels) != sorted(M.labels):
            raise InternalConsistencyError(f"wedge^{n}: term {j} bases differ between constructions")
        pos = {l: k for k, l in enumerate(M.labels)}
        perm[j] = [pos[l] for l in E.labels]
    for j, d in D.diffs.items():
        diffs[j] = GradedMap(terms[j], terms[j - 1], d.entries)
    C = ChainComplex(data.ring, terms, diffs, f"wedge^{n}")
    sign = -1 if n % 2 else 1
    for j in set(C.diffs) | set(explicit.diffs):
        a, b = C.diff(j), explicit.diff(j)
        pj, pj1 = perm.get(j, []), perm.get(j - 1, [])
        for r_e, r_c in enumerate(pj1):
            for c_e, c_c in enumerate(pj):
                if a.entries[r_c][c_c] != b.entries[r_e][c_e].scale(sign):
                    raise InternalConsistencyError(
                        f"wedge^{n}: differential {j} differs from the explicit formula")
    return C


# ---------------------------------------------------------------------------
# Eagon–Northcott complexes

def _dual_part(data: TwoTermData, e: int) -> ChainComplex:
    """Σ^{1-r} (𝕊^e σ)^∨ ⊗ (det F)^∨ with labels ("D", I, μ)."""
    r = data.r
    D = shift(twist(dual_complex(koszul_S(data, e)), -data.det_degree), 1 - r)
    terms = {}
    for k, M in D.terms.items():
        terms[k] = GradedFreeModule(M.ring, M.degrees, [("D", l[1][1], l[1][2]) for l in M.labels])
    diffs = {k: GradedMap(terms[k], terms[k - 1], d.entries) for k, d in D.diffs.items()}
    return ChainComplex(data.ring, terms, diffs)


def epsilon_map(data: TwoTermData, d: int, source: GradedFreeModule, target: GradedFreeModule) -> GradedMap:
    """Gluing map ∧^{n+d} W ⊗ (det V)^∨ -> ∧^d W.

    A dual-part label ("D", I, ()) with |I| = e is identified with w_[m] ⌟ w_I^* in
    ∧^{m-e} W = ∧^{n+d} W; then ε(a) = a ⌟ ∧^n σ^∨(v_1^* ∧ … ∧ v_n^*), where
    ∧^n σ^∨(v^*) = Σ_K det σ_{[n],K} w_K^*.
    """
    from .groebner import det_polys
    R = data.ring
    m, n = data.m, data.n
    sig = data.sigma.entries
    top = {K: det_polys([[sig[t][k] for k in K] for t in range(n)], R) for K in ext_basis(m, n)}
    tidx = {l: k for k, l in enumerate(target.labels)}
    ents = [[R.zero] * source.rank for _ in range(target.rank)]
    full = tuple(range(m))
    for col, (_, I, _mu) in enumerate(source.labels):
        rest = tuple(v for v in full if v not in I)
        s0 = merge_sign(I, rest)
        for K, c in top.items():
            if not c or not set(K) <= set(rest):
                continue
            J = tuple(v for v in rest if v not in K)
            s = s0 * merge_sign(K, J)
            row = tidx[("S", J, ())]
            ents[row][col] = ents[row][col] + (c if s > 0 else -c)
    return GradedMap(source, target, ents)


def eagon_northcott(data: TwoTermData, d: int) -> ChainComplex:
    """EN_d(σ) for σ: W -> V with r = rk V - rk W.

    * d >= 0 contributes 𝕊^d σ in degrees 0..min(m, d);
    * e = -r-d >= 0 contributes Σ^{1-r}(𝕊^e σ)^∨ ⊗ (det F)^∨, term i in degree 1-r-i;
    * when both occur (r <= 0, 0 <= d <= -r) the pieces are joined by ε from degree d+1 to d.
    For r > 0 and -r < d < 0 the complex is zero.
    """
    R = data.ring
    e = -data.r - d
    terms: Dict[int, GradedFreeModule] = {}
    diffs: Dict[int, GradedMap] = {}
    if d >= 0:
        S = koszul_S(data, d)
        terms.update(S.terms)
        diffs.update(S.diffs)
    if e >= 0:
        D = _dual_part(data, e)
        if set(D.terms) & set(terms):
            raise InternalConsistencyError("EN pieces overlap in homological degree")
        terms.update(D.terms)
        diffs.update(D.diffs)
    if d >= 0 and e >= 0:
        lo_dual = min(D.terms)
        if lo_dual != d + 1 or max(S.terms) != d:
            raise InternalConsistencyError("EN pieces are not adjacent")
        diffs[d + 1] = epsilon_map(data, d, terms[d + 1], terms[d])
    C = ChainComplex(R, terms, diffs, f"EN_{d}")
    chk = check_complex(C)
    if not chk:
        raise InternalConsistencyError(f"EN_{d} fails d∘d = 0 at {chk.failing}")
    return C


@dataclass
class DualityReport:
    d: int
    ok: bool
    reason: str = ""
    signs: Dict[Tuple[int, object], int] = dc_field(default_factory=dict)

    def to_json(self) -> dict:
        return {"d": self.d, "ok": self.ok, "reason": self.reason}


def _swap_label(l):
    # ("dual", ("S", I, μ)) <-> ("D", I, μ) and vice versa
    _, inner = l
    tag = "D" if inner[0] == "S" else "S"
    return (tag, inner[1], inner[2])


def en_duality_check(data: TwoTermData, d: int) -> DualityReport:
    """Check EN_d ⊗ det F ≅ Σ^{1-r}(EN_{-r-d})^∨ by a diagonal ±1 change of basis."""
    r = data.r
    lhs = twist(eagon_northcott(data, d), data.det_degree)
    rhs = shift(dual_complex(eagon_northcott(data, -r - d)), 1 - r)
    if lhs.support != rhs.support:
        return DualityReport(d, False, f"supports differ: {lhs.support} vs {rhs.support}")
    perms = {}
    for k in lhs.support:
        A, B = lhs.terms[k], rhs.terms[k]
        blabels = [_swap_label(l) for l in B.labels]
        if sorted(zip(A.labels, A.degrees)) != sorted(zip(blabels, B.degrees)):
            return DualityReport(d, False, f"term {k}: bases or degrees differ")
        pos = {l: i for i, l in enumerate(blabels)}
        perms[k] = [pos[l] for l in A.labels]
    # union-find with parity over basis vectors (k, index in lhs basis)
    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}
    parity: Dict[Tuple[int, int], int] = {}

    def find(x):
        if x not in parent:
            parent[x], parity[x] = x, 0
            return x, 0
        if parent[x] == x:
            return x, 0
        root, p = find(parent[x])
        parent[x] = root
        parity[x] ^= p
        return root, parity[x]

    def union(a, b, rel):
        ra, pa = find(a)
        rb, pb = find(b)
        if ra == rb:
            return (pa ^ pb) == rel
        parent[ra] = rb
        parity[ra] = pa ^ pb ^ rel
        return True

    for k in lhs.support:
        if k - 1 not in perms:
            continue
        a, b = lhs.diff(k), rhs.diff(k)
        pk, pk1 = perms[k], perms[k - 1]
        for i in range(a.target.rank):
            for j in range(a.source.rank):
                x, y = a.entries[i][j], b.entries[pk1[i]][pk[j]]
                if x == y:
                    if x and not union((k - 1, i), (k, j), 0):
                        return DualityReport(d, False, f"sign conflict in differential {k}")
                elif x == -y:
                    if not union((k - 1, i), (k, j), 1):
                        return DualityReport(d, False, f"sign conflict in differential {k}")
                else:
                    return DualityReport(d, False, f"differential {k} entry ({i},{j}) differs beyond sign")
    signs = {}
    for k in lhs.support:
        for i in range(lhs.terms[k].rank):
            _, p = find((k, i))
            signs[(k, lhs.terms[k].labels[i])] = -1 if p else 1
    return DualityReport(d, True, "", signs)


# ---------------------------------------------------------------------------
# cosection Koszul complexes

def cosection_koszul(r: GradedMap, E: Optional[GradedFreeModule] = None) -> ChainComplex:
    """Koszul complex ∧^• M (⊗ E) of a cosection r: M -> R with contraction differential.

    ``r`` has one row; term i has basis ∧^i M with generator degrees Σ deg M.
    """
    if r.target.rank != 1:
        raise PreconditionError("a cosection has a rank-one target")
    M = r.source
    if M.rank < 1:
        raise PreconditionError("cosection needs a source of rank >= 1")
    R = r.ring
    base = r.target.degrees[0]
    E = E if E is not None else GradedFreeModule(R, [0])
    terms, diffs = {}, {}
    for i in range(M.rank + 1):
        B = ext_basis(M.rank, i)
        labels, degs = [], []
        for I in B:
            for k, ed in enumerate(E.degrees):
                labels.append(("K", I, k))
                degs.append(sum(M.degrees[a] for a in I) - i * base + base + ed)
        terms[i] = GradedFreeModule(R, degs, labels)
    for i in range(1, M.rank + 1):
        src, tgt = terms[i], terms[i - 1]
        tidx = {l: k for k, l in enumerate(tgt.labels)}
        ents = [[R.zero] * src.rank for _ in range(tgt.rank)]
        for col, (_, I, k) in enumerate(src.labels):
            for jpos, x in enumerate(I):
                a = r.entries[0][x]
                if a:
                    row = tidx[("K", I[:jpos] + I[jpos + 1:], k)]
                    ents[row][col] = a if jpos % 2 == 0 else -a
        diffs[i] = GradedMap(src, tgt, ents)
    return ChainComplex(R, terms, diffs, "Koszul")


def cosection(ring: PolynomialRing, elements: Sequence) -> GradedMap:
    """Cosection R^m -> R given by ring elements; zero elements get degree 1."""
    polys = [ring(a) for a in elements]
    degs = []
    for p in polys:
        if not p:
            degs.append(1)
            continue
        h = p.homogeneous_degree()
        if h is None:
            raise PreconditionError(f"{p} is not homogeneous")
        degs.append(h)
    return GradedMap(GradedFreeModule(ring, degs), GradedFreeModule(ring, [0]), [polys])


# ---------------------------------------------------------------------------
# derived powers and convolution

def derived_sym(data: TwoTermData, n: int, e_max: int) -> HomologyTable:
    return homology_dims(koszul_S(data, n), e_max)


def derived_ext(data: TwoTermData, n: int, e_max: int) -> HomologyTable:
    return homology_dims(koszul_wedge(data, n), e_max)


def convolve(maps: Sequence[GradedMap], top: Optional[int] = None, names: Optional[Sequence[str]] = None) -> ChainComplex:
    """Assemble composable maps f_1, f_2, … (f_{k+1} ∘ f_k = 0) into one complex.

    ``maps[0]`` starts in homological degree ``top`` (default: the number of maps).
    """
    if not maps:
        raise PreconditionError("nothing to convolve")
    names = list(names) if names else [f"f{k}" for k in range(len(maps))]
    for k in range(len(maps) - 1):
        comp = maps[k + 1] @ maps[k]
        if not comp.is_zero():
            raise PreconditionError(f"composite {names[k + 1]} ∘ {names[k]} is nonzero")
    return complex_from_maps(maps, len(maps) if top is None else top, "convolution")


def differentials_of(C: ChainComplex) -> List[GradedMap]:
    """Differentials of C from the top degree down, for feeding back into ``convolve``."""
    lo, hi = C.bounds()
    return [C.diff(n) for n in range(hi, lo, -1)]


__all__ = [
    "TwoTermData", "two_term", "koszul_S", "koszul_wedge", "koszul_wedge_explicit", "eagon_northcott",
    "epsilon_map", "en_duality_check", "DualityReport", "cosection_koszul", "cosection", "derived_sym",
    "derived_ext", "convolve", "differentials_of",
]
