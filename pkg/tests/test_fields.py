from fractions import Fraction

import pytest
from hypothesis import given

from khoszul.algebra import (
    GF,
    QQ,
    ZHALF,
    ZZ,
    Coefficients,
    Field,
    IntMatrix,
    PresentedGroup,
    change_coefficients,
    field_homology,
    homology_at,
    kernel_basis,
    matrix_rank,
    nullspace,
)
from khoszul.algebra.fields import Span, apply
from strategies import int_matrices

G = PresentedGroup.from_invariants(1, [2])


def test_parse():
    assert Coefficients.parse("Z") == ZZ
    assert Coefficients.parse("F5") == GF(5)
    assert Coefficients.parse("Zhalf") == ZHALF
    with pytest.raises(ValueError):
        Coefficients.parse("F4")
    with pytest.raises(ValueError):
        Coefficients.parse("R")


def test_change_over_q():
    assert change_coefficients(G, QQ).rank == 1


def test_change_over_f2():
    assert change_coefficients(G, GF(2)).rank == 2
    assert change_coefficients(G, GF(3)).rank == 1


def test_change_over_zhalf():
    H = PresentedGroup.from_invariants(1, [6])
    rep = change_coefficients(H, ZHALF)
    assert rep.rank == 1 and rep.torsion == (3,)
    assert change_coefficients(PresentedGroup.from_invariants(1, [4]), ZHALF).torsion == ()


def test_span_and_express():
    F = Field(0)
    s = Span(F, track=True)
    s.add({0: 1, 1: 1}, "a")
    s.add({1: 2}, "b")
    assert s.dim == 2
    combo = s.express({0: 1, 1: 3})
    assert combo == {"a": Fraction(1), "b": Fraction(1)}
    assert not s.add({0: 2, 1: 2})


def test_nullspace_q_and_fp():
    M = IntMatrix.from_dense([[1, 2], [2, 4]])
    for F in (Field(0), Field(3)):
        (v,) = nullspace(M, F)
        assert not apply(M, v, F)
    assert len(nullspace(IntMatrix.from_dense([[2]]), Field(2))) == 1


@given(int_matrices(max_rows=6, max_cols=6))
def test_field_rank_two_ways(M):
    """Rank over F_p from Gaussian elimination equals rank read off the SNF."""
    from khoszul.algebra import elementary_divisors

    ds = elementary_divisors(M)
    for p in (2, 3, 5):
        assert matrix_rank(M, GF(p)) == sum(1 for d in ds if d % p)
    assert matrix_rank(M, QQ) == len(ds)


@given(int_matrices(max_rows=5, max_cols=5), int_matrices(max_rows=5, max_cols=5, max_entry=3))
def test_field_homology_matches_universal_coefficients(d_out, R):
    K = kernel_basis(d_out)
    R = IntMatrix(K.cols, R.cols, {k: v for k, v in R.items() if k[0] < K.cols})
    d_in = K @ R
    Hz, _ = homology_at(d_in, d_out)
    for c in (QQ, GF(5)):
        fh = field_homology(d_in, d_out, c)
        # cochain UCT: H^n(C; F) = H^n ⊗ F + Tor(H^{n+1}, F)
        want = change_coefficients(Hz, c).rank
        nxt = homology_at(d_out, IntMatrix(0, d_out.rows)).group
        extra = sum(1 for t in nxt.torsion if c.kind == "F" and t % c.p == 0)
        assert fh.dim == want + extra


def test_field_homology_projection():
    d_in = IntMatrix.from_dense([[1], [1], [0]])
    d_out = IntMatrix(0, 3)
    fh = field_homology(d_in, d_out, QQ)
    assert fh.dim == 2
    for i, z in enumerate(fh.lifts):
        e = [0] * fh.dim
        e[i] = 1
        assert fh.project(z) == e
    # a boundary projects to zero
    assert fh.project({0: 1, 1: 1}) == [0, 0]
