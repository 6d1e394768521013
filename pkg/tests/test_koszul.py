import random
from math import comb

import pytest

from derproj import koszul as kz
from derproj.arith import QQ, PolynomialRing
from derproj.errors import PreconditionError
from derproj.homalg import GradedFreeModule, GradedMap, check_complex, homology_dims
from derproj.koszul import (TwoTermData, convolve, cosection, cosection_koszul, derived_ext, derived_sym,
                            differentials_of, eagon_northcott, en_duality_check, epsilon_map, koszul_S,
                            koszul_wedge, koszul_wedge_explicit, two_term)
from derproj.serre import classical_sym_presentation

from conftest import GF, random_linear_matrix


def zero_target(R, m, deg=0):
    """σ: R^m -> 0, whose cofiber is the suspension of R^m."""
    return TwoTermData(GradedMap(GradedFreeModule(R, [deg] * m), GradedFreeModule(R, []), []))


def test_two_term_degree_defaults(Rxy):
    t = two_term(Rxy, [["x", "y^2"], ["y", "0"]], target_degrees=[0, 0])
    assert tuple(t.source.degrees) == (1, 2)
    assert (t.m, t.n, t.r) == (2, 2, 0)
    with pytest.raises(PreconditionError):
        two_term(Rxy, [["x"], ["y^2"]])


def test_koszul_S_ranks(Rxyz):
    t = two_term(Rxyz, [["x", "y"], ["y", "z"], ["z", "x"]])
    for n in range(4):
        C = koszul_S(t, n)
        for i, M in C.terms.items():
            assert M.rank == comb(2, i) * comb(n - i + 2, n - i)
        assert check_complex(C)
    with pytest.raises(PreconditionError):
        koszul_S(t, -1)


def test_illusie_sym_of_suspension():
    """𝕊^n(R^m -> 0): homology only in degree n, free of rank C(m, n)."""
    R = PolynomialRing(QQ, ["x"])
    for m in range(0, 5):
        t = zero_target(R, m)
        for n in range(0, 5):
            H = homology_dims(koszul_S(t, n), 3, 0)
            for (k, e), v in H.entries.items():
                assert v == (comb(m, n) if k == n else 0)
            assert sum(H.dim(n, e) for e in range(4)) == 4 * comb(m, n)


def test_illusie_wedge_of_suspension():
    """⋀^n(R^m -> 0): homology only in degree n, free of the divided-power rank."""
    R = PolynomialRing(QQ, ["x"])
    for m in range(1, 5):
        t = zero_target(R, m)
        for n in range(0, 5):
            H = homology_dims(koszul_wedge(t, n), 3, 0)
            for (k, e), v in H.entries.items():
                assert v == (comb(n + m - 1, n) if k == n else 0)


def test_sym_h0_is_classical_sym(rng):
    R = PolynomialRing(QQ, ["x", "y", "z"])
    for _ in range(15):
        rows = random_linear_matrix(rng, R, rng.randint(1, 3), rng.randint(1, 2))
        t = two_term(R, rows)
        if t.target.rank == 0:
            continue
        for n in range(3):
            H = homology_dims(koszul_S(t, n), 5, 0)
            want = classical_sym_presentation(t.sigma, n).graded_dims(5, 0)
            assert {e: H.dim(0, e) for e in want} == want


def test_wedge_matches_explicit_up_to_sign(Rxyz):
    t = two_term(Rxyz, [["x", "y"], ["y", "z"], ["z", "0"]])
    for n in range(5):
        C, E = koszul_wedge(t, n), koszul_wedge_explicit(t, n)
        assert C.support == E.support
        assert check_complex(C) and check_complex(E)
        assert homology_dims(C, 4, 0) == homology_dims(E, 4, 0)


def test_wedge2_of_column(Rxy):
    t = two_term(Rxy, [["x"], ["y"]])
    H = derived_ext(t, 2, 4)
    assert H.nonzero() == {(0, 0): 1}


def test_derived_sym_of_x_x_is_classical():
    R = PolynomialRing(QQ, ["x"])
    t = two_term(R, [["x"], ["x"]])
    for d in range(4):
        H = derived_sym(t, d, 5)
        assert all(v == 0 for (k, _), v in H.entries.items() if k > 0)
    # the dual side is not: R^2 -> R via (x x) has kernel R in homological degree 1
    assert derived_sym(t.dual(), 1, 3).nonzero() == {(0, -1): 1, (1, 0): 1, (1, 1): 1, (1, 2): 1, (1, 3): 1}


def test_cosection_koszul_degrees(Rxy):
    K = cosection_koszul(cosection(Rxy, ["x", "y^2"]))
    assert tuple(K.terms[1].degrees) == (1, 2)
    assert list(K.terms[2].degrees) == [3]
    with pytest.raises(PreconditionError):
        cosection(Rxy, ["x + y^2"])
    with pytest.raises(PreconditionError):
        cosection_koszul(GradedMap(GradedFreeModule(Rxy, [1]), GradedFreeModule(Rxy, [0, 0]),
                                   [[Rxy.gens[0]], [Rxy.gens[1]]]))


def test_convolution_roundtrip(Rxyz):
    K = cosection_koszul(cosection(Rxyz, ["x", "y", "z"]))
    maps = differentials_of(K)
    C = convolve(maps, names=["d3", "d2", "d1"])
    assert C.support == K.support and all(C.diff(n) == K.diff(n) for n in (1, 2, 3))
    x = Rxyz.gens[0]
    f = GradedMap(GradedFreeModule(Rxyz, [1]), GradedFreeModule(Rxyz, [0]), [[x]])
    g = GradedMap(GradedFreeModule(Rxyz, [2]), GradedFreeModule(Rxyz, [1]), [[x]])
    with pytest.raises(PreconditionError, match="f1 ∘ g"):
        convolve([g, f], names=["g", "f1"])
    with pytest.raises(PreconditionError):
        convolve([])


# -- Eagon–Northcott ---------------------------------------------------------------

def test_en_positive_rank_h0(Rxy):
    t = two_term(Rxy, [["x"], ["y"]])
    for d in range(4):
        H = homology_dims(eagon_northcott(t, d), 6, 0)
        assert all(v == 0 for (k, _), v in H.entries.items() if k > 0)
        # S^d of the cokernel of R(-1) -> R^2 has Hilbert function d + 1 + e
        assert [H.dim(0, e) for e in range(4)] == [d + 1 + e for e in range(4)]
        want = classical_sym_presentation(t.sigma, d).graded_dims(6, 0)
        assert {e: H.dim(0, e) for e in want} == want


def test_en_middle_range_is_zero():
    R = PolynomialRing(QQ, ["x", "y"])
    t = two_term(R, [["x"], ["y"], ["0"]])
    assert eagon_northcott(t, -1).is_zero()


def test_en_square_glued_by_determinant(Rxy):
    t = two_term(Rxy, [["x", "0"], ["0", "y"]])
    C = eagon_northcott(t, 0)
    assert C.ranks() == {0: 1, 1: 1}
    assert C.diff(1).entries == ((Rxy.parse("x*y"),),)
    H = homology_dims(C, 4, 0)
    assert [H.dim(0, e) for e in range(5)] == [1, 2, 2, 2, 2]


def test_epsilon_map_on_2x3():
    R = PolynomialRing(QQ, ["x", "y", "z"])
    # rank W = 3 > rank V = 2: r = -1, d in {0, 1} glues
    t = two_term(R, [["x", "y", "z"], ["y", "z", "x"]])
    for d in (0, 1):
        C = eagon_northcott(t, d)
        assert check_complex(C)
        assert d + 1 in C.diffs


def test_en_duality_on_examples(Rxy):
    for rows in ([["x"], ["y"], ["0"]], [["x", "0"], ["0", "y"]], [["x", "y"]], [["x"], ["y"]]):
        t = two_term(Rxy, rows)
        for d in range(-t.r - 3, 4):
            rep = en_duality_check(t, d)
            assert rep.ok, (rows, d, rep.reason)


def test_en_duality_detects_a_perturbed_differential(monkeypatch, Rxy):
    t = two_term(Rxy, [["x", "0"], ["0", "y"]])
    real = kz.eagon_northcott

    def perturbed(data, d):
        C = real(data, d)
        if d == 1 and 1 in C.diffs:
            f = C.diffs[1]
            ents = [list(r) for r in f.entries]
            ents[0][0] = ents[0][0].scale(2) if ents[0][0] else Rxy.gens[0]
            C.diffs[1] = GradedMap(f.source, f.target, ents)
        return C

    monkeypatch.setattr(kz, "eagon_northcott", perturbed)
    assert not en_duality_check(t, 1).ok


def test_en_random_population_is_complexes():
    rng = random.Random(17)
    R = PolynomialRing(GF, ["a", "b", "c"])
    count = 0
    while count < 60:
        m, n = rng.randint(1, 3), rng.randint(1, 4)
        rows = random_linear_matrix(rng, R, n, m, monomial=rng.random() < 0.5)
        t = two_term(R, rows)
        for d in range(-t.r - 2, 3):
            assert check_complex(eagon_northcott(t, d))
        count += 1
