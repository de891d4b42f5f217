import pytest

from khoszul.algebra import GF, QQ, ZZ, IntMatrix
from khoszul.catalog import get_link
from khoszul.koszul import filtration_ss, verify_convergence
from khoszul.pointed import build_pointed, build_reduced_pointed


def test_unknot_pages():
    pc = build_pointed(get_link("unknot").with_markings([(1, 0)]))
    pages = filtration_ss(pc, QQ)
    assert pages[0].entries == {(0, 0): 2, (1, 1): 2}
    assert pages[1].entries == {(0, 0): 1, (1, 1): 1}
    assert pages[1].dims == pages[-1].dims
    assert pages[-1].total == 2
    assert verify_convergence(pages, pc).ok


def test_no_markings_single_page():
    pc = build_pointed(get_link("trefoil"))
    pages = filtration_ss(pc, QQ)
    assert len(pages) == 1
    assert {t for (k, t) in pages[0].entries} == {0, 2, 3}
    assert verify_convergence(pages, pc).ok


def test_hopf_e2_total_and_degeneration():
    d = get_link("hopf")
    pc = build_pointed(d.with_markings(d.one_marking_per_component()))
    pages = filtration_ss(pc, QQ)
    assert pages[1].total == 8
    assert pages[1].dims == pages[-1].dims
    assert verify_convergence(pages, pc).ok


def test_integers_rejected():
    pc = build_pointed(get_link("unknot").with_markings([(1, 0)]))
    with pytest.raises(ValueError, match="field"):
        filtration_ss(pc, ZZ)


@pytest.mark.parametrize("variant", ["standard", "doubled"])
@pytest.mark.parametrize("c", [QQ, GF(5), GF(2)])
def test_figure_eight_two_markings(variant, c):
    pc = build_pointed(get_link("figure-eight").with_markings([(1, 0), (4, 0)]), variant)
    pages = filtration_ss(pc, c)
    rep = verify_convergence(pages, pc)
    assert rep.ok, rep.mismatches


def test_reduced_trefoil():
    d = get_link("trefoil").with_markings([(3, 0)], (1, 0))
    pc = build_reduced_pointed(d)
    rep = verify_convergence(filtration_ss(pc, QQ), pc)
    assert rep.ok


def test_corrupted_differential_is_caught():
    d = get_link("hopf")
    pc = build_pointed(d.with_markings(d.one_marking_per_component()))
    C = pc.complex
    t = 1
    M = C.diffs[t]
    (r, c), v = next(iter(M.items()))
    C.diffs[t] = M + IntMatrix(M.rows, M.cols, {(r, c): 1})
    pages = filtration_ss(pc, QQ)
    rep = verify_convergence(pages, pc)
    assert not rep.ok
    assert rep.mismatches and {"check", "at", "expected", "found"} <= set(rep.mismatches[0])


def test_page_json():
    pc = build_pointed(get_link("unknot").with_markings([(1, 0)]))
    js = filtration_ss(pc, QQ)[0].to_json()
    assert js["r"] == 1 and js["total"] == 4
