import pytest
from hypothesis import given, settings

from khoszul.algebra import GF, QQ, ZHALF, ZZ, PresentedGroup, change_coefficients
from khoszul.catalog import get_link
from khoszul.khovanov import kh
from khoszul.link import DiagramError, Marking, parse_braid
from khoszul.pointed import build_pointed, build_reduced_pointed, pointed_homology, subsets, wedge_sign
from strategies import braid_words


def _total(H):
    return PresentedGroup.from_invariants(H.total_rank, H.torsion())


def unknot(*marks):
    return get_link("unknot").with_markings(marks)


def test_subsets_and_signs():
    assert subsets(2) == [(), (0,), (1,), (0, 1)]
    assert wedge_sign(0, (1,)) == 1
    assert wedge_sign(1, (0,)) == -1
    assert wedge_sign(2, (0, 1)) == 1


def test_no_markings_is_khovanov():
    for lid in ("trefoil", "hopf"):
        d = get_link(lid)
        for v in ("standard", "doubled"):
            H = pointed_homology(build_pointed(d, v), ZZ)
            assert H.groups == {b: g for b, g in kh(d).groups.items()}


def test_unknot_doubled_complex():
    pc = build_pointed(unknot((1, 0)), "doubled")
    assert pc.complex.rank(0) == 2 and pc.complex.rank(1) == 2
    assert pc.complex.d(0).to_dense() == [[0, 0], [2, 0]]


def test_unknot_standard_and_doubled():
    assert _total(pointed_homology(build_pointed(unknot((1, 0)), "standard"))) == PresentedGroup.free(2)
    assert _total(pointed_homology(build_pointed(unknot((1, 0)), "doubled"))) == PresentedGroup.from_invariants(2, [2])


def test_unknot_f3_agree():
    for v in ("standard", "doubled"):
        assert pointed_homology(build_pointed(unknot((1, 0)), v), GF(3)).total_rank == 2


def test_two_markings_same_component():
    pc = build_pointed(unknot((1, 0), (1, 1)), "standard")
    pc.complex.check_d_squared()
    assert pc.l == 2


def test_unknown_variant():
    with pytest.raises(ValueError):
        build_pointed(unknot((1, 0)), "tripled")


def test_reduced_unknot_basepoint_only():
    d = get_link("unknot").with_markings((), (1, 0))
    H = pointed_homology(build_reduced_pointed(d))
    assert _total(H) == PresentedGroup.free(1)


def test_reduced_u2():
    d = get_link("unlink:2").with_markings([(1, 0)], (2, 0))
    assert pointed_homology(build_reduced_pointed(d, variant="standard"), QQ).total_rank == 2
    assert pointed_homology(build_reduced_pointed(d, variant="doubled"), GF(2)).total_rank == 4


def test_reduced_basepoint_collision():
    d = get_link("hopf").with_markings([(1, 0)])
    with pytest.raises(DiagramError):
        build_reduced_pointed(d, (1, 0))
    with pytest.raises(DiagramError):
        build_reduced_pointed(d)


def test_chain_ranks():
    pc = build_pointed(get_link("hopf").with_markings([(1, 0), (3, 0)]))
    ranks = pc.chain_ranks()
    assert sum(ranks.values()) == 4 * pc.base.total_rank
    assert ranks[(0, 0)] == pc.base.rank(0)


def test_doubled_f2_is_free_exterior():
    for lid in ("trefoil", "hopf", "figure-eight"):
        d = get_link(lid).with_markings([(1, 0), (2, 0)])
        assert pointed_homology(build_pointed(d, "doubled"), GF(2)).total_rank == 4 * kh(d, GF(2)).total_rank


def _by_total(H):
    out = {}
    for (t, q), v in (H.dims.items() if H.coefficients.is_field else ((b, g.free_rank) for b, g in H.groups.items())):
        out[t] = out.get(t, 0) + v
    return {t: v for t, v in out.items() if v}


@pytest.mark.parametrize("lid", ["hopf", "trefoil", "figure-eight"])
def test_standard_and_doubled_agree_away_from_two(lid):
    d = get_link(lid).with_markings([(1, 0), (3, 0)])
    a, b = build_pointed(d, "standard"), build_pointed(d, "doubled")
    for c in (QQ, GF(3), GF(5)):
        assert _by_total(pointed_homology(a, c)) == _by_total(pointed_homology(b, c))
    za, zb = pointed_homology(a, ZZ), pointed_homology(b, ZZ)
    for b_ in set(za.groups) | set(zb.groups):
        ga = za.groups.get(b_, PresentedGroup(0))
        gb = zb.groups.get(b_, PresentedGroup(0))
        assert change_coefficients(ga, ZHALF) == change_coefficients(gb, ZHALF)


@settings(max_examples=20)
@given(braid_words(max_strands=3, max_len=4))
def test_random_pointed_squares_to_zero(bw):
    d = parse_braid(*bw)
    marks = [Marking(1, 0), Marking(d.n_arcs, 0)] if d.n_arcs > 1 else [Marking(1, 0)]
    d = d.with_markings(marks, Marking(1, 7))
    for v in ("standard", "doubled"):
        build_pointed(d, v).complex.check_d_squared()
        build_reduced_pointed(d, variant=v).complex.check_d_squared()
