import random
from math import comb, factorial

import pytest

from derproj.arith import QQ, Field, PolynomialRing
from derproj.errors import PreconditionError
from derproj.homalg import GradedFreeModule, GradedMap
from derproj.multilinear import (MultilinearBasisIndex, determinant, div_module, div_power, ext_basis,
                                 ext_module, ext_power, interior_product, merge_sign, power_filtration,
                                 sym_basis, sym_filtration, sym_module, sym_power, sym_to_div, wedge)

from conftest import GF, SMALL, random_linear_matrix


def _map(R, rows, src_deg=1):
    n, m = len(rows), len(rows[0])
    return GradedMap(GradedFreeModule(R, [src_deg] * m), GradedFreeModule(R, [0] * n), rows)


def _random_constant_map(rng, R, n, m):
    return GradedMap(GradedFreeModule(R, [0] * m), GradedFreeModule(R, [0] * n),
                     [[R.constant(rng.randint(-2, 2)) for _ in range(m)] for _ in range(n)])


def test_rank_binomials():
    R = PolynomialRing(QQ, ["x"])
    for r in range(1, 6):
        M = GradedFreeModule(R, [0] * r)
        for n in range(0, 6):
            assert sym_module(M, n).rank == comb(n + r - 1, n)
            assert ext_module(M, n).rank == comb(r, n)
            assert div_module(M, n).rank == comb(n + r - 1, n)
    zero = GradedFreeModule(R, [])
    assert [sym_module(zero, n).rank for n in range(3)] == [1, 0, 0]
    assert [ext_module(zero, n).rank for n in range(3)] == [1, 0, 0]


def test_basis_index_validation():
    MultilinearBasisIndex("sym", (0, 0, 1))
    with pytest.raises(ValueError):
        MultilinearBasisIndex("ext", (0, 0))
    with pytest.raises(ValueError):
        MultilinearBasisIndex("sym", (1, 0))
    with pytest.raises(ValueError):
        MultilinearBasisIndex("tensor", (0,))


def test_identity_powers_are_identities(Rxy):
    I = GradedMap.identity(GradedFreeModule(Rxy, [0, 0]))
    S2 = sym_power(I, 2)
    assert S2.source.rank == 3 and S2 == GradedMap.identity(S2.source)
    assert ext_power(I, 2) == GradedMap.identity(ext_module(I.source, 2))
    assert div_power(I, 3) == GradedMap.identity(div_module(I.source, 3))


def test_functoriality_of_powers():
    rng = random.Random(8)
    R = PolynomialRing(QQ, ["x", "y"])
    for _ in range(40):
        a, b, c = (rng.randint(1, 3) for _ in range(3))
        f = _random_constant_map(rng, R, b, a)
        g = _random_constant_map(rng, R, c, b)
        for n in range(0, 4):
            assert sym_power(g @ f, n) == sym_power(g, n) @ sym_power(f, n)
            assert ext_power(g @ f, n) == ext_power(g, n) @ ext_power(f, n)
            assert div_power(g @ f, n) == div_power(g, n) @ div_power(f, n)


def test_sym_to_div_is_natural_and_invertible_in_char_zero():
    rng = random.Random(9)
    R = PolynomialRing(QQ, ["x"])
    for _ in range(20):
        f = _random_constant_map(rng, R, rng.randint(1, 3), rng.randint(1, 3))
        for n in range(4):
            lhs = div_power(f, n) @ sym_to_div(f.source, n)
            rhs = sym_to_div(f.target, n) @ sym_power(f, n)
            assert lhs == rhs
    M = GradedFreeModule(R, [0, 0])
    assert determinant(sym_to_div(M, 3)) != R.zero


def test_sym_to_div_degenerates_in_char_p():
    R = PolynomialRing(SMALL, ["x"])
    M = GradedFreeModule(R, [0, 0])
    assert determinant(sym_to_div(M, 6)) != R.zero
    assert determinant(sym_to_div(M, 7)) == R.zero


def test_top_exterior_power_is_determinant(Rxy):
    rng = random.Random(2)
    for _ in range(20):
        n = rng.randint(1, 4)
        rows = random_linear_matrix(rng, Rxy, n, n)
        f = _map(Rxy, rows)
        top = ext_power(f, n)
        assert top.entries == ((determinant(f),),)


def test_ext_power_of_2x3(Rxy):
    x, y = Rxy.gens
    f = _map(Rxy, [[x, 0, y], [0, y, x]])
    w2 = ext_power(f, 2)
    assert w2.target.rank == 1 and w2.source.rank == 3
    assert w2.entries == ((x * y, x * x, -y * y),)


def test_sym_power_of_column(Rxy):
    x, y = Rxy.gens
    f = _map(Rxy, [[x], [y]])
    s2 = sym_power(f, 2)
    # (x e0 + y e1)^2 = x^2 e0^2 + 2xy e0e1 + y^2 e1^2
    assert [r[0] for r in s2.entries] == [x * x, x * y * 2, y * y]
    with pytest.raises(PreconditionError):
        sym_power(f, -1)


def test_wedge_and_contraction_conventions():
    e1, e2, e3 = {(0,): 1}, {(1,): 1}, {(2,): 1}
    e12 = wedge(e1, e2)
    assert e12 == {(0, 1): 1}
    assert wedge(e2, e1) == {(0, 1): -1}
    assert wedge(e1, e1) == {}
    assert interior_product(e12, {(0,): 1}) == {(1,): 1}
    assert interior_product(e12, {(1,): 1}) == {(0,): -1}
    e123 = wedge(e12, e3)
    assert interior_product(e123, {(0, 2): 1}) == {(1,): -1}
    assert merge_sign((1,), (0,)) == -1 and merge_sign((0,), (0,)) == 0
    with pytest.raises(PreconditionError):
        interior_product(e1, e12)


def test_wedge_associative_and_graded_commutative():
    rng = random.Random(6)
    def rand_elt(k):
        return {I: rng.randint(-2, 2) for I in ext_basis(5, k) if rng.random() < 0.5}
    for _ in range(100):
        a, b, c = rand_elt(1), rand_elt(2), rand_elt(1)
        assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
        s = {k: -v for k, v in wedge(c, a).items()}
        assert wedge(a, c) == s


@pytest.mark.parametrize("kind", ["sym", "ext", "div"])
def test_filtrations_of_split_sums(kind):
    enum = ext_basis if kind == "ext" else sym_basis
    for r1 in range(0, 4):
        for r2 in range(0, 4):
            for n in range(0, 5):
                F = power_filtration(kind, n, r1, r2)
                assert F.quotient_isos_ok
                assert F.ranks() == sorted(F.ranks())
                assert F.ranks()[-1] == len(F.basis)
                for i, q in enumerate(F.quotient_ranks):
                    assert q == len(enum(r1, n - i)) * len(enum(r2, i))
    assert sym_filtration(2, 1, 1).ranks() == [1, 2, 3]
