"""Buchberger's algorithm, normal forms, codimension, Hilbert series, minor ideals.

Internally polynomials are plain ``{exponent: coeff}`` dicts; the public API
speaks :class:`~derproj.arith.Polynomial`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Sequence, Tuple

from .arith import (Monomial, Polynomial, PolynomialRing, _q, mono_divides,
                    mono_lcm, order_key)
from .errors import ContextError, InternalConsistencyError, PreconditionError

Terms = Dict[Monomial, object]


class Ideal:
    """Ideal of a polynomial ring given by generators. Zero generators are dropped."""

    def __init__(self, ring: PolynomialRing, generators: Sequence[Polynomial]):
        gens = []
        for g in generators:
            g = ring(g)
            if g:
                gens.append(g)
        self.ring = ring
        self.generators: Tuple[Polynomial, ...] = tuple(gens)

    def __repr__(self):
        return f"Ideal({[str(g) for g in self.generators]})"

    def is_zero(self) -> bool:
        return not self.generators

    def is_homogeneous(self) -> bool:
        return all(g.is_homogeneous() for g in self.generators)

    def groebner(self, order: str = "grevlex") -> "GroebnerBasis":
        return groebner_basis(self, order)

    def codim(self):
        return ideal_codim(self)

    def contains(self, f: Polynomial) -> bool:
        return not normal_form(self.ring(f), groebner_basis(self, "grevlex"))


@dataclass(frozen=True)
class GroebnerBasis:
    ring: PolynomialRing
    order: str
    basis: Tuple[Polynomial, ...]
    reduced: bool = True
    leading: Tuple[Monomial, ...] = dc_field(default=(), compare=False)

    def is_unit_ideal(self) -> bool:
        return any(g.is_constant() for g in self.basis)

    def leading_monomials(self) -> Tuple[Monomial, ...]:
        return self.leading


# -- dict-level helpers -------------------------------------------------------

def _lead(f: Terms, key) -> Monomial:
    return max(f, key=key)


def _sub_scaled(f: Terms, g: Terms, c, shift: Monomial, p: int) -> None:
    """f -= c * x^shift * g, in place."""
    for m, a in g.items():
        mm = tuple([x + y for x, y in zip(m, shift)])
        v = f.get(mm, 0) - c * a
        if p:
            v %= p
        if v:
            f[mm] = v if p else _q(v)
        else:
            f.pop(mm, None)


def _reduce(f: Terms, G: List[Terms], leads: List[Monomial], key, field) -> Terms:
    """Full reduction of f by G (G monic). Returns the remainder."""
    p = field.p
    f = dict(f)
    rem: Terms = {}
    while f:
        m = _lead(f, key)
        c = f[m]
        for g, lm in zip(G, leads):
            if mono_divides(lm, m):
                shift = tuple([x - y for x, y in zip(m, lm)])
                _sub_scaled(f, g, c, shift, p)
                break
        else:
            rem[m] = c
            del f[m]
    return rem


def _monic(f: Terms, key, field) -> Terms:
    lc = f[_lead(f, key)]
    inv = field.inv(lc)
    p = field.p
    if p:
        return {m: c * inv % p for m, c in f.items()}
    return {m: _q(c * inv) for m, c in f.items()}


def _spoly(f: Terms, g: Terms, lf: Monomial, lg: Monomial, p: int) -> Terms:
    lcm = mono_lcm(lf, lg)
    out = {}
    sf = tuple([x - y for x, y in zip(lcm, lf)])
    sg = tuple([x - y for x, y in zip(lcm, lg)])
    for m, a in f.items():
        out[tuple([x + y for x, y in zip(m, sf)])] = a
    _sub_scaled(out, g, 1, sg, p)
    return out


def _buchberger(gens: List[Terms], key, field) -> List[Terms]:
    p = field.p
    G: List[Terms] = []
    leads: List[Monomial] = []
    pairs: List[Tuple[int, int]] = []

    def add(h: Terms):
        h = _monic(h, key, field)
        lh = _lead(h, key)
        k = len(G)
        G.append(h)
        leads.append(lh)
        for i in range(k):
            pairs.append((i, k))

    for g in gens:
        h = _reduce(g, G, leads, key, field)
        if h:
            add(h)
    done = set()
    while pairs:
        # normal selection strategy: smallest lcm first
        pairs.sort(key=lambda ij: key(mono_lcm(leads[ij[0]], leads[ij[1]])), reverse=True)
        i, j = pairs.pop()
        done.add((i, j))
        li, lj = leads[i], leads[j]
        lcm = mono_lcm(li, lj)
        # product criterion
        if all(a == 0 or b == 0 for a, b in zip(li, lj)):
            continue
        # chain criterion
        skip = False
        for k in range(len(G)):
            if k in (i, j) or not mono_divides(leads[k], lcm):
                continue
            if (min(i, k), max(i, k)) in done and (min(j, k), max(j, k)) in done:
                skip = True
                break
        if skip:
            continue
        h = _reduce(_spoly(G[i], G[j], li, lj, p), G, leads, key, field)
        if h:
            add(h)
    return _interreduce(G, key, field)


def _interreduce(G: List[Terms], key, field) -> List[Terms]:
    leads = [_lead(g, key) for g in G]
    # minimal: drop elements whose leading monomial is divisible by another's
    keep = []
    for i, li in enumerate(leads):
        dominated = False
        for j, lj in enumerate(leads):
            if i != j and mono_divides(lj, li) and (lj != li or j < i):
                dominated = True
                break
        if not dominated:
            keep.append(G[i])
    out = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        ol = [_lead(o, key) for o in others]
        lg = _lead(g, key)
        tail = dict(g)
        del tail[lg]
        r = _reduce(tail, others, ol, key, field)
        r[lg] = g[lg]
        out.append(_monic(r, key, field))
    out.sort(key=lambda g: key(_lead(g, key)), reverse=True)
    return out


def groebner_basis(I: Ideal, order: str = "grevlex") -> GroebnerBasis:
    """Reduced Groebner basis of ``I``. The zero ideal yields an empty basis."""
    return _groebner_cached(I.ring, order, I.generators)


@lru_cache(maxsize=512)
def _groebner_cached(ring: PolynomialRing, order: str, gens: Tuple[Polynomial, ...]) -> GroebnerBasis:
    key = order_key(order)
    G = _buchberger([dict(g.terms) for g in gens], key, ring.field)
    basis = tuple(Polynomial(ring, g, _clean=True) for g in G)
    gb = GroebnerBasis(ring, order, basis, True, tuple(_lead(g, key) for g in G))
    # each input generator must reduce to zero
    for g in gens:
        if normal_form(g, gb):
            raise InternalConsistencyError("generator not in its own Groebner basis ideal")
    return gb


def normal_form(f: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Remainder of ``f`` on division by ``gb``; zero iff f lies in the ideal."""
    if f.ring != gb.ring:
        raise ContextError("polynomial and Groebner basis live in different rings")
    key = order_key(gb.order)
    G = [g.terms for g in gb.basis]
    r = _reduce(f.terms, G, list(gb.leading), key, f.ring.field)
    return Polynomial(f.ring, r, _clean=True)


def s_polynomials_reduce(gb: GroebnerBasis) -> bool:
    """Buchberger criterion: every S-polynomial of the basis reduces to zero."""
    key = order_key(gb.order)
    G = [g.terms for g in gb.basis]
    leads = list(gb.leading)
    p = gb.ring.field.p
    for i, j in combinations(range(len(G)), 2):
        s = _spoly(G[i], G[j], leads[i], leads[j], p)
        if _reduce(s, G, leads, key, gb.ring.field):
            return False
    return True


# -- dimension -----------------------------------------------------------------

def _max_independent(leads: Sequence[Monomial], nvars: int) -> int:
    """Largest size of a variable set U with no leading monomial supported in U."""
    supports = [frozenset(i for i, e in enumerate(m) if e) for m in leads]
    for size in range(nvars, -1, -1):
        for U in combinations(range(nvars), size):
            Us = set(U)
            if not any(s <= Us for s in supports):
                return size
    return -1


def krull_dim(I: Ideal) -> int:
    """dim R/I; -1 when I is the unit ideal."""
    gb = groebner_basis(I, "grevlex")
    if gb.is_unit_ideal():
        return -1
    return _max_independent(gb.leading, I.ring.nvars)


def ideal_codim(I: Ideal):
    """nvars - dim R/I, or ``math.inf`` when 1 lies in I."""
    d = krull_dim(I)
    if d < 0:
        return math.inf
    return I.ring.nvars - d


# -- Hilbert series ------------------------------------------------------------

def _minimalize(gens) -> Tuple[Monomial, ...]:
    gens = sorted(set(gens), key=sum)
    out = []
    for g in gens:
        if not any(mono_divides(h, g) for h in out):
            out.append(g)
    return tuple(sorted(out))


def _poly_sub(a: List[int], b: List[int]) -> List[int]:
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) - (b[i] if i < len(b) else 0) for i in range(n)]


@lru_cache(maxsize=None)
def _hs_numerator(gens: Tuple[Monomial, ...]) -> Tuple[int, ...]:
    """Numerator N with HS(R/(gens)) = N(t)/(1-t)^v for a monomial ideal."""
    if not gens:
        return (1,)
    # pairwise coprime generators: product formula
    seen = set()
    coprime = True
    for g in gens:
        s = {i for i, e in enumerate(g) if e}
        if s & seen:
            coprime = False
            break
        seen |= s
    if coprime:
        num = [1]
        for g in gens:
            d = sum(g)
            num = _poly_sub(num, [0] * d + num)
        return tuple(num)
    # N(J + (m)) = N(J) - t^deg(m) N(J : m)
    *rest, m = gens
    rest = tuple(rest)
    colon = _minimalize(tuple(max(a - b, 0) for a, b in zip(g, m)) for g in rest)
    a = list(_hs_numerator(rest))
    b = list(_hs_numerator(colon))
    return tuple(_trim(_poly_sub(a, [0] * sum(m) + b)))


def _trim(c: List[int]) -> List[int]:
    while len(c) > 1 and c[-1] == 0:
        c.pop()
    return c


def hilbert_series(I: Ideal) -> Tuple[int, ...]:
    """Coefficients (constant first) of the numerator over (1-t)^nvars."""
    if not I.is_homogeneous():
        raise PreconditionError("hilbert_series needs homogeneous generators")
    gb = groebner_basis(I, "grevlex")
    if gb.is_unit_ideal():
        return (0,)
    return tuple(_trim(list(_hs_numerator(_minimalize(gb.leading)))))


def hilbert_function(I: Ideal, up_to: int) -> List[int]:
    """dim_k (R/I)_t for t = 0..up_to, expanded from the Hilbert series."""
    num = hilbert_series(I)
    v = I.ring.nvars
    out = []
    for t in range(up_to + 1):
        s = 0
        for i, a in enumerate(num):
            if i <= t:
                s += a * math.comb(t - i + v - 1, v - 1) if v else (a if i == t else 0)
        out.append(s)
    return out


# -- determinants and minors ---------------------------------------------------

def det_polys(M: Sequence[Sequence[Polynomial]], ring: PolynomialRing) -> Polynomial:
    """Determinant by Laplace expansion along columns, memoized on row subsets."""
    n = len(M)
    if n == 0:
        return ring.one
    if any(len(r) != n for r in M):
        raise PreconditionError("determinant of a non-square matrix")
    memo: Dict[Tuple[int, ...], Polynomial] = {}

    def rec(rows: Tuple[int, ...]) -> Polynomial:
        # rows: which rows remain; column index = n - len(rows)
        if not rows:
            return ring.one
        hit = memo.get(rows)
        if hit is not None:
            return hit
        col = n - len(rows)
        total = ring.zero
        for k, r in enumerate(rows):
            a = M[r][col]
            if not a:
                continue
            sub = rec(rows[:k] + rows[k + 1:])
            if sub:
                term = a * sub
                total = total - term if k % 2 else total + term
        memo[rows] = total
        return total

    return rec(tuple(range(n)))


def minors(entries: Sequence[Sequence[Polynomial]], ring: PolynomialRing, k: int) -> List[Polynomial]:
    nrows = len(entries)
    ncols = len(entries[0]) if nrows else 0
    if not 1 <= k <= min(nrows, ncols):
        raise PreconditionError(f"minor size {k} outside 1..{min(nrows, ncols)}")
    out = []
    for rs in combinations(range(nrows), k):
        for cs in combinations(range(ncols), k):
            out.append(det_polys([[entries[r][c] for c in cs] for r in rs], ring))
    return out


def minors_ideal(sigma, k: int) -> Ideal:
    """Ideal of all k x k minors of a GradedMap (or a nested list of polynomials)."""
    entries = sigma.entries if hasattr(sigma, "entries") else sigma
    ring = sigma.ring if hasattr(sigma, "ring") else entries[0][0].ring
    return Ideal(ring, minors(entries, ring, k))
