import random

import pytest

from derproj.arith import QQ, Field, PolynomialRing

GF = Field(32003)
SMALL = Field(7)


def random_poly(rng: random.Random, R: PolynomialRing, max_deg=3, max_terms=4, homogeneous=None):
    """Random polynomial with small coefficients; homogeneous of the given degree if asked."""
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        if homogeneous is not None:
            mons = R.monomials(homogeneous)
            m = rng.choice(mons)
        else:
            m = tuple(rng.randint(0, max_deg) for _ in range(R.nvars))
        c = rng.randint(-5, 5)
        if R.field.p == 0 and rng.random() < 0.3:
            from fractions import Fraction
            c = Fraction(c, rng.randint(1, 4))
        terms[m] = c
    return R.monomial(R.monomials(0)[0], 0) + sum((R.monomial(m, c) for m, c in terms.items()), R.zero)


def random_linear_matrix(rng, R, n, m, density=0.6, monomial=False):
    """n x m matrix with homogeneous linear (or monomial linear) entries."""
    gens = R.gens
    rows = []
    for _ in range(n):
        row = []
        for _ in range(m):
            if rng.random() > density:
                row.append(R.zero)
            elif monomial:
                row.append(rng.choice(gens))
            else:
                p = R.zero
                for g in gens:
                    p = p + g.scale(rng.randint(-2, 2))
                row.append(p)
        rows.append(row)
    return rows


def random_homogeneous(rng, R, deg):
    if deg < 0:
        return R.zero
    p = R.zero
    for m in rng.sample(R.monomials(deg), min(2, len(R.monomials(deg)))):
        p = p + R.monomial(m, rng.randint(-3, 3))
    return p


def _unitriangular(rng, M):
    """Random automorphism I + N of M, N strictly upper in degree order; returns (g, g^-1)."""
    from derproj.homalg import GradedMap
    R, k = M.ring, M.rank
    order = sorted(range(k), key=lambda j: M.degrees[j])
    ents = [[R.one if i == j else R.zero for j in range(k)] for i in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            i, j = order[a], order[b]
            if rng.random() < 0.6:
                ents[i][j] = random_homogeneous(rng, R, M.degrees[j] - M.degrees[i])
    g = GradedMap(M, M, ents)
    N = g + (-GradedMap.identity(M))
    inv, power = GradedMap.identity(M), GradedMap.identity(M)
    for t in range(1, k):
        power = power @ N
        inv = inv + (power if t % 2 == 0 else -power)
    return g, inv


def random_complex(rng, R, lo=0, hi=5, max_rank=3):
    """Random homogeneous complex in [lo, hi] with term ranks <= max_rank and dense differentials.

    Built as a sum of one-, two- and three-term pieces (the last a Koszul complex on
    two forms), then conjugated by random unitriangular changes of basis."""
    from derproj.homalg import ChainComplex, GradedFreeModule, GradedMap
    degs = {k: [] for k in range(lo, hi + 1)}
    blocks = []  # (position, source index, target index, poly)
    for _ in range(rng.randint(1, 5)):
        kind = rng.choice(["one", "two", "three"])
        k = rng.randint(lo, hi)
        a = rng.randint(0, 2)
        if kind == "one" and len(degs[k]) < max_rank:
            degs[k].append(a)
        elif kind == "two" and k + 1 <= hi and len(degs[k]) < max_rank and len(degs[k + 1]) < max_rank:
            e = rng.randint(0, 2)
            f = random_homogeneous(rng, R, e)
            degs[k].append(a)
            degs[k + 1].append(a + e)
            blocks.append((k + 1, len(degs[k + 1]) - 1, len(degs[k]) - 1, f))
        elif (kind == "three" and k + 2 <= hi and len(degs[k]) < max_rank
              and len(degs[k + 1]) <= max_rank - 2 and len(degs[k + 2]) < max_rank):
            f, g = random_homogeneous(rng, R, 1), random_homogeneous(rng, R, 1)
            degs[k].append(a)
            degs[k + 1] += [a + 1, a + 1]
            degs[k + 2].append(a + 2)
            t0, t1, t2 = len(degs[k]) - 1, len(degs[k + 1]) - 2, len(degs[k + 2]) - 1
            blocks += [(k + 1, t1, t0, f), (k + 1, t1 + 1, t0, g),
                       (k + 2, t2, t1, -g), (k + 2, t2, t1 + 1, f)]
    terms = {k: GradedFreeModule(R, v) for k, v in degs.items() if v}
    diffs = {}
    for k in range(lo + 1, hi + 1):
        if k in terms and k - 1 in terms:
            ents = [[R.zero] * terms[k].rank for _ in range(terms[k - 1].rank)]
            for pos, src, tgt, f in blocks:
                if pos == k:
                    ents[tgt][src] = f
            diffs[k] = GradedMap(terms[k], terms[k - 1], ents)
    changes = {k: _unitriangular(rng, M) for k, M in terms.items()}
    for k, d in list(diffs.items()):
        diffs[k] = changes[k - 1][0] @ d @ changes[k][1]
    return ChainComplex(R, terms, diffs, "random")


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture
def Rxy():
    return PolynomialRing(QQ, ["x", "y"])


@pytest.fixture
def Rxyz():
    return PolynomialRing(QQ, ["x", "y", "z"])
