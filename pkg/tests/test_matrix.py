import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from khoszul.algebra import IntMatrix, block_diag, check_snf, elementary_divisors, hstack, integer_rank, snf, vstack, xgcd
from oracles import dense_invariants
from strategies import int_matrices


def test_construction_and_access():
    M = IntMatrix.from_dense([[1, 0, 2], [0, 0, -3]])
    assert M.shape == (2, 3)
    assert M[0, 2] == 2 and M[1, 0] == 0
    assert M.nnz == 3
    assert M.T.to_dense() == [[1, 0], [0, 0], [2, -3]]
    assert M.column(2) == {0: 2, 1: -3}


def test_zero_entries_are_not_stored():
    M = IntMatrix(2, 2, {(0, 0): 0, (1, 1): 5})
    assert M.nnz == 1


def test_out_of_range_rejected():
    with pytest.raises(Exception):
        IntMatrix(2, 2, {(2, 0): 1})


def test_arithmetic():
    A = IntMatrix.from_dense([[1, 2], [3, 4]])
    B = IntMatrix.identity(2)
    assert (A @ B) == A
    assert (A - A).is_zero()
    assert (A + A) == A.scale(2)
    assert A.apply([1, 1]) == [3, 7]


def test_stacking():
    A = IntMatrix.from_dense([[1]])
    B = IntMatrix.from_dense([[2]])
    assert hstack([A, B]).to_dense() == [[1, 2]]
    assert vstack([A, B]).to_dense() == [[1], [2]]
    assert block_diag([A, B]).to_dense() == [[1, 0], [0, 2]]


def test_xgcd():
    for a, b in [(12, 18), (-4, 6), (0, 5), (7, 0), (0, 0)]:
        g, s, t = xgcd(a, b)
        assert s * a + t * b == g


def test_snf_already_diagonal():
    S = snf(IntMatrix.from_dense([[2, 0], [0, 0]]))
    assert S.divisors == (2,)
    assert S.D.to_dense() == [[2, 0], [0, 0]]


def test_snf_small():
    M = IntMatrix.from_dense([[1, 2], [3, 4]])
    S = snf(M)
    check_snf(M, S)
    assert S.divisors == (1, 2)


def test_snf_deterministic():
    M = IntMatrix.from_dense([[2, 4, 4], [-6, 6, 12], [10, -4, -16]])
    a, b = snf(M), snf(M)
    assert a.U == b.U and a.V == b.V and a.divisors == b.divisors == (2, 6, 12)


def test_large_entries_exact():
    big = 10 ** 40
    M = IntMatrix.from_dense([[big, big + 1], [big - 1, big]])
    S = snf(M)
    check_snf(M, S)
    assert S.divisors == (1, 1)


def test_empty_matrices():
    for r, c in [(0, 0), (0, 3), (3, 0)]:
        M = IntMatrix(r, c)
        S = snf(M)
        check_snf(M, S)
        assert S.rank == 0


@given(int_matrices())
def test_snf_invariants(M):
    S = snf(M)
    check_snf(M, S)
    ds = S.divisors
    assert all(d > 0 for d in ds)
    assert all(ds[i + 1] % ds[i] == 0 for i in range(len(ds) - 1))


@given(int_matrices(max_rows=6, max_cols=6))
def test_divisors_match_sympy(M):
    dense = M.to_dense()
    want = dense_invariants(dense) if M.rows and M.cols else ()
    assert elementary_divisors(M) == want


@given(int_matrices(), int_matrices())
def test_rank_of_product_bounded(A, B):
    if A.cols != B.rows:
        B = IntMatrix(A.cols, B.cols, {k: v for k, v in B.items() if k[0] < A.cols})
    assert integer_rank(A @ B) <= min(integer_rank(A), integer_rank(B))


@given(st.integers(0, 2 ** 32))
def test_transpose_preserves_divisors(seed):
    rng = random.Random(seed)
    M = IntMatrix(5, 7, {(rng.randrange(5), rng.randrange(7)): rng.randint(-9, 9) for _ in range(12)})
    assert elementary_divisors(M) == elementary_divisors(M.T)
