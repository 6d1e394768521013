import random
from math import comb

import pytest

from derproj.arith import QQ, PolynomialRing
from derproj.errors import PreconditionError
from derproj.homalg import GradedMap, check_complex, homology_dims
from derproj.koszul import cosection, cosection_koszul, koszul_S, two_term
from derproj.simplicial import (SimplicialDegreeWindow, codegeneracy, coface, dold_kan, homotopy_dims,
                                moore_homology_dims, nondegenerate_indices, normalize, simplicial_koszul,
                                simplicial_sym, surjections)

from conftest import GF, _unitriangular, random_complex


def test_surjection_counts():
    # a monotone surjection [n] ↠ [k] is a choice of k jump positions among n
    for n in range(6):
        for k in range(n + 1):
            assert len(surjections(n, k)) == comb(n, k)
    assert all(len(set(e)) == k + 1 and list(e) == sorted(e) for n in range(5) for k in range(n + 1)
               for e in surjections(n, k))


def test_cosimplicial_identities():
    def comp(f, g):  # f after g
        return tuple(f[g[t]] for t in range(len(g)))
    for n in range(4):
        for i in range(n + 2):
            for j in range(n + 2):
                if i < j:
                    # δ^j δ^i = δ^i δ^{j-1}
                    assert comp(coface(n + 1, j), coface(n, i)) == comp(coface(n + 1, i), coface(n, j - 1))
        for i in range(n + 1):
            # σ^i δ^i = σ^i δ^{i+1} = id on [n]
            assert comp(codegeneracy(n, i), coface(n + 1, i)) == tuple(range(n + 1))
            assert comp(codegeneracy(n, i), coface(n + 1, i + 1)) == tuple(range(n + 1))


def test_unitriangular_inverse():
    rng = random.Random(4)
    R = PolynomialRing(QQ, ["x", "y"])
    from derproj.homalg import GradedFreeModule
    for _ in range(20):
        M = GradedFreeModule(R, [rng.randint(0, 3) for _ in range(rng.randint(1, 4))])
        g, h = _unitriangular(rng, M)
        assert g @ h == GradedMap.identity(M)


def test_dk_roundtrip_random_population():
    rng = random.Random(11)
    for field in (QQ, GF):
        R = PolynomialRing(field, ["x", "y"])
        for _ in range(25):
            P = random_complex(rng, R, 0, 5, 3)
            S = dold_kan(P, 5)
            assert S.check_identities(), S.check_identities().failures[:3]
            assert normalize(S) == P


def test_dk_level_ranks():
    R = PolynomialRing(QQ, ["x"])
    P = cosection_koszul(cosection(R, ["x"]))  # ranks 1, 1
    # level n of DK: P_0 + n P_1
    assert dold_kan(P, 4).level_ranks() == [1, 2, 3, 4, 5]
    with pytest.raises(PreconditionError):
        dold_kan(P, 0)


def test_dk_homotopy_matches_homology(Rxy):
    P = cosection_koszul(cosection(Rxy, ["x", "x"]))
    S = dold_kan(P, 3)
    H = homotopy_dims(S, 4)
    assert H == homology_dims(P, 4, H.e_min).restrict(S.valid_up_to)
    assert moore_homology_dims(S, 4) == H


def test_nondegenerate_count_matches_terms(Rxyz):
    P = cosection_koszul(cosection(Rxyz, ["x", "y", "z"]))
    S = dold_kan(P, 4)
    assert [len(nondegenerate_indices(S, n)) for n in range(5)] == [1, 3, 3, 1, 0]


def test_kos_delta_regular_sequence(Rxy):
    W = SimplicialDegreeWindow(3, 4, 3)
    S = simplicial_koszul(Rxy, ["x", "y"], W)
    assert S.check_identities()
    H = homotopy_dims(S, 4, 0)
    assert S.valid_up_to == 2
    assert H.row(0) == [1, 0, 0, 0, 0]
    assert H.row(1) == [0] * 5 and H.row(2) == [0] * 5


def test_kos_delta_repeated_element(Rxy):
    S = simplicial_koszul(Rxy, ["x", "x"], SimplicialDegreeWindow(3, 4, 3))
    H = homotopy_dims(S, 4, 0)
    chain = homology_dims(cosection_koszul(cosection(Rxy, ["x", "x"])), 4, 0)
    assert any(H.row(1))
    assert all(H.dim(k, e) == chain.dim(k, e) for k in range(3) for e in range(5))
    assert moore_homology_dims(S, 4) == H


def test_kos_delta_weighted_and_inhomogeneous(Rxy):
    S = simplicial_koszul(Rxy, ["x^2", "y"], SimplicialDegreeWindow(3, 5, 3))
    H = homotopy_dims(S, 5, 0)
    assert H.row(0) == [1, 1, 0, 0, 0, 0]
    with pytest.raises(PreconditionError):
        simplicial_koszul(Rxy, ["x + y^2"], SimplicialDegreeWindow(2, 3, 2))


@pytest.mark.parametrize("rows", [[["x"], ["y"]], [["x"], ["x"]], [["x", "y"]], [["x", "0"], ["0", "y"]]])
def test_simplicial_sym_matches_koszul_S(rows):
    R = PolynomialRing(QQ, ["x", "y"])
    t = two_term(R, rows)
    for d in range(3):
        S = simplicial_sym(t, d, 3)
        assert S.check_identities()
        H = homotopy_dims(S, 4)
        chain = homology_dims(koszul_S(t, d), 4, H.e_min).restrict(S.valid_up_to)
        assert all(H.dim(k, e) == chain.dim(k, e) for k in range(S.valid_up_to + 1) for e in range(H.e_min, 5))


def test_simplicial_sym_level_zero_is_sym(Rxyz):
    t = two_term(Rxyz, [["x"], ["y"], ["z"]])
    for d in range(4):
        assert simplicial_sym(t, d, 2).level_ranks()[0] == comb(d + 2, 2)
