import pytest

from khoszul.algebra import QQ, GroupMorphism, IntMatrix, PresentedGroup
from khoszul.catalog import get_link
from khoszul.koszul import (
    KoszulError,
    field_koszul_dims,
    koszul,
    koszul_homology,
    pointed_koszul,
)
from khoszul.pointed import build_pointed, pointed_homology
from khoszul.khovanov import field_module
from khoszul.algebra import complex_homology


def one_per(lid):
    d = get_link(lid)
    return d.with_markings(d.one_marking_per_component())


def test_zero_operators():
    Z = PresentedGroup.free(1)
    zero = GroupMorphism.zero(Z, Z)
    for l in (1, 2, 3):
        KH = koszul_homology(koszul(Z, [zero] * l))
        assert KH.total.canonical() == PresentedGroup.free(2 ** l)


def test_koszul_square_zero_checked():
    Z2 = PresentedGroup.free(2)
    bad = GroupMorphism(Z2, Z2, IntMatrix.from_dense([[1, 0], [0, 0]]))
    with pytest.raises(KoszulError, match="square"):
        koszul(Z2, [bad])


def test_koszul_commutation_checked():
    Z4 = PresentedGroup.free(4)
    A = GroupMorphism(Z4, Z4, IntMatrix(4, 4, {(1, 0): 1}))
    B = GroupMorphism(Z4, Z4, IntMatrix(4, 4, {(2, 1): 1}))
    with pytest.raises(KoszulError, match="commute"):
        koszul(Z4, [A, B])


@pytest.mark.parametrize("m", [1, 2, 3])
def test_unlink_koszul(m):
    _, _, KH = pointed_koszul(build_pointed(one_per(f"unlink:{m}")))
    assert KH.total.canonical() == PresentedGroup.free(2 ** m)


def test_unknot_koszul_by_degree():
    _, _, KH = pointed_koszul(build_pointed(one_per("unknot")))
    assert KH.groups == [PresentedGroup.free(1), PresentedGroup.free(1)]
    assert KH.rank == 2


def test_hopf_koszul():
    _, _, KH = pointed_koszul(build_pointed(one_per("hopf")))
    assert KH.total.canonical() == PresentedGroup.free(8)


def test_hopf_both_markings_one_component():
    # regression value, recorded when first computed
    d = get_link("hopf").with_markings([(1, 0), (2, 0)])
    _, _, KH = pointed_koszul(build_pointed(d))
    assert [str(g) for g in KH.groups] == ["Z^2", "Z^4", "Z^2"]


@pytest.mark.parametrize("lid", ["hopf", "trefoil", "figure-eight"])
def test_integral_koszul_rank_matches_field(lid):
    d = one_per(lid)
    pc = build_pointed(d)
    _, _, KH = pointed_koszul(pc)
    H = complex_homology(pc.base, QQ)
    fm = field_module(H, pc.base, pc.operators)
    assert KH.rank == sum(field_koszul_dims(fm, pc.l).values())


@pytest.mark.parametrize("lid", ["unlink:2", "hopf", "trefoil", "figure-eight"])
def test_rank_inequality_consequence(lid):
    pc = build_pointed(one_per(lid))
    _, _, KH = pointed_koszul(pc)
    assert pointed_homology(pc, QQ).total_rank <= KH.rank
