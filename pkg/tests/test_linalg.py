import random
from fractions import Fraction

import pytest

from derproj.arith import QQ
from derproj.errors import ContextError
from derproj.linalg import Matrix, echelon, nullspace_of_rows, rank_of_rows

from conftest import GF, SMALL

sympy = pytest.importorskip("sympy")


def _random_dense(rng, n, m, lo=-3, hi=3, zero_bias=0.4):
    return [[0 if rng.random() < zero_bias else rng.randint(lo, hi) for _ in range(m)] for _ in range(n)]


def test_rank_matches_sympy_over_qq():
    rng = random.Random(11)
    for _ in range(300):
        n, m = rng.randint(1, 7), rng.randint(1, 7)
        A = _random_dense(rng, n, m)
        assert Matrix.from_dense(QQ, A).rank() == sympy.Matrix(A).rank()


def test_rank_mod_p_can_drop():
    A = [[7, 0], [0, 1]]
    assert Matrix.from_dense(QQ, A).rank() == 2
    assert Matrix.from_dense(SMALL, A).rank() == 1


@pytest.mark.parametrize("field", [QQ, GF, SMALL], ids=["QQ", "GF32003", "GF7"])
def test_nullspace_is_kernel_of_right_dimension(field):
    rng = random.Random(field.p + 3)
    for _ in range(200):
        n, m = rng.randint(1, 6), rng.randint(1, 7)
        M = Matrix.from_dense(field, _random_dense(rng, n, m))
        ns = M.nullspace()
        assert len(ns) == m - M.rank()
        for v in ns:
            assert M.apply(v) == {}
        assert rank_of_rows(ns, field) == len(ns)


def test_echelon_pivots_are_normalized():
    piv = echelon([{0: 2, 1: 4}, {0: 1, 2: Fraction(1, 3)}], QQ)
    assert all(row[c] == 1 for c, row in piv.items())
    assert len(piv) == 2


def test_matmul_transpose_identities():
    rng = random.Random(5)
    for _ in range(100):
        a, b, c = rng.randint(1, 5), rng.randint(1, 5), rng.randint(1, 5)
        A = Matrix.from_dense(QQ, _random_dense(rng, a, b))
        B = Matrix.from_dense(QQ, _random_dense(rng, b, c))
        assert (A @ B).transpose() == B.transpose() @ A.transpose()
        assert (A @ B).to_dense() == (sympy.Matrix(A.to_dense()) * sympy.Matrix(B.to_dense())).tolist()


def test_shape_mismatch_and_ragged():
    with pytest.raises(ContextError):
        Matrix.from_dense(QQ, [[1, 2], [3]])
    with pytest.raises(ContextError):
        Matrix.from_dense(QQ, [[1, 2]]) @ Matrix.from_dense(QQ, [[1, 2]])


def test_nullspace_of_zero_rows():
    assert nullspace_of_rows([], 3, QQ) == [{0: 1}, {1: 1}, {2: 1}]
