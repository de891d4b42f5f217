import itertools

import pytest
from hypothesis import given, settings

from khoszul.algebra import GF, QQ, ZZ, IntMatrix, InvariantError, PresentedGroup, complex_homology
from khoszul.catalog import alternates, get_link
from khoszul.khovanov import (
    arc_parity,
    assemble_module,
    basepoint_operator,
    build_cube,
    field_module,
    induced_action,
    kh,
    reduced_complex,
)
from khoszul.link import Marking, mirror, parse_braid
from oracles import dense_khovanov
from strategies import braid_words


def _as_table(H):
    return {b: (g.free_rank, g.torsion) for b, g in H.groups.items() if not g.is_trivial()}


def test_unknot_cube():
    cube = build_cube(get_link("unknot"))
    assert list(cube.states) == [()]
    assert cube.complex.total_rank == 2
    assert not cube.complex.diffs or all(M.is_zero() for M in cube.complex.diffs.values())


def test_hopf_rank():
    assert kh(get_link("hopf"), QQ).total_rank == 4
    H = kh(get_link("hopf"), ZZ)
    assert H.total_rank == 4 and not H.torsion()


def test_trefoil_one_two_torsion():
    H = kh(get_link("trefoil"), ZZ)
    assert H.torsion() == [2]
    assert H.total_rank == 4


def test_unknot_f2():
    assert kh(get_link("unknot"), GF(2)).total_rank == 2


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_unlink_free(m):
    H = kh(get_link(f"unlink:{m}"))
    assert H.total_rank == 2 ** m and not H.torsion()


@pytest.mark.parametrize("lid", ["hopf", "trefoil-right", "trefoil-left", "figure-eight", "unlink:2"])
def test_matches_dense_oracle(lid):
    d = get_link(lid)
    assert _as_table(kh(d)) == dense_khovanov(d)


@settings(max_examples=25)
@given(braid_words(max_strands=3, max_len=5))
def test_random_braids_match_oracle(bw):
    d = parse_braid(*bw)
    assert _as_table(kh(d)) == dense_khovanov(d)


def test_jones_evaluation():
    # unnormalised Jones polynomial of the right trefoil: q + q^3 + q^5 - q^9
    assert build_cube(get_link("trefoil")).complex.euler_characteristic() == {1: 1, 3: 1, 5: 1, 9: -1}


def test_euler_equals_homology_euler():
    for lid in ("trefoil", "figure-eight", "hopf"):
        d = get_link(lid)
        H = kh(d, QQ)
        chi = {}
        for (h, q), v in H.dims.items():
            chi[q] = chi.get(q, 0) + (-1) ** (h % 2) * v
        assert {q: v for q, v in chi.items() if v} == build_cube(d).complex.euler_characteristic()


@pytest.mark.parametrize("lid", ["unknot", "hopf", "trefoil-right", "trefoil-left", "figure-eight"])
def test_euler_same_on_alternate_diagrams(lid):
    want = build_cube(get_link(lid)).complex.euler_characteristic()
    for d in alternates(lid):
        assert build_cube(d).complex.euler_characteristic() == want


@pytest.mark.parametrize("lid", ["trefoil-right", "figure-eight", "hopf"])
def test_mirror_duality(lid):
    d = get_link(lid)
    a, b = kh(d, QQ), kh(mirror(d), QQ)
    assert {(-h, -q): v for (h, q), v in a.dims.items() if v} == {k: v for k, v in b.dims.items() if v}


def test_basepoint_operator_unknot():
    d = get_link("unknot").with_markings([(1, 0)])
    cube = build_cube(d)
    X = basepoint_operator(cube, 0)
    assert X.matrices[0].to_dense() == [[0, 0], [1, 0]]
    assert X.vertex_matrix(cube, ()).to_dense() == [[0, 0], [1, 0]]


def test_basepoint_operator_squares_to_zero():
    d = get_link("figure-eight").with_markings([(a, 0) for a in range(1, 9)])
    cube = build_cube(d)
    for i in range(8):
        X = basepoint_operator(cube, i)
        for M in X.matrices.values():
            assert (M @ M).is_zero()


def test_invalid_marking_index():
    cube = build_cube(get_link("hopf").with_markings([(1, 0)]))
    with pytest.raises(IndexError):
        basepoint_operator(cube, 3)
    with pytest.raises(IndexError):
        basepoint_operator(cube, (9, 0))


def test_raw_operators_flip_sign_across_crossing():
    # X_i + X_k is null-homotopic when i, k meet at a crossing as under-strand
    d = get_link("hopf").with_markings([(1, 0), (2, 0)])
    cube = build_cube(d)
    H = kh(d)
    raw = [basepoint_operator(cube, i, normalized=False) for i in range(2)]
    mod = assemble_module(H, cube.complex, raw)
    assert (mod.endos[0] + mod.endos[1]).is_zero()
    assert not mod.endos[0].equals(mod.endos[1])


@pytest.mark.parametrize("lid", ["hopf", "trefoil", "figure-eight"])
def test_same_component_same_action(lid):
    d = get_link(lid)
    marks = [Marking(a, 0) for a in d.arcs] + [Marking(1, 1)]
    d = d.with_markings(marks)
    cube = build_cube(d)
    H = kh(d)
    mod = assemble_module(H, cube.complex, [basepoint_operator(cube, i) for i in range(len(marks))])
    for i, j in itertools.combinations(range(len(marks)), 2):
        if d.component_of(marks[i]) == d.component_of(marks[j]):
            assert mod.endos[i].equals(mod.endos[j]), (marks[i], marks[j])


def test_same_component_hopf_over_q():
    d = get_link("hopf").with_markings([(1, 0), (2, 0)])
    cube = build_cube(d)
    H = complex_homology(cube.complex, QQ)
    fm = field_module(H, cube.complex, [basepoint_operator(cube, i) for i in range(2)])
    assert fm.endos[0] == fm.endos[1]


def test_hopf_components_over_f2():
    # X_1 and X_2 agree mod 2; over Q they differ by a sign on one summand
    d = get_link("hopf").with_markings(get_link("hopf").one_marking_per_component())
    cube = build_cube(d)
    ops = [basepoint_operator(cube, i) for i in range(2)]
    f2 = field_module(complex_homology(cube.complex, GF(2)), cube.complex, ops)
    assert f2.endos[0] == f2.endos[1]
    q = field_module(complex_homology(cube.complex, QQ), cube.complex, ops)
    assert q.endos[0] != q.endos[1]
    neg = [{r: q.field.norm(-x) for r, x in col.items()} for col in q.endos[1]]
    assert any(a == b and a for a, b in zip(q.endos[0], neg))


def test_arc_parity_alternates():
    d = get_link("trefoil")
    comp = d.components[0]
    assert [arc_parity(d, a) for a in comp] == [1, -1] * (len(comp) // 2)


def test_induced_action_unknot():
    d = get_link("unknot").with_markings([(1, 0)])
    cube = build_cube(d)
    acts = induced_action(kh(d), basepoint_operator(cube, 0), cube.complex)
    assert acts[(0, 1)].matrix.to_dense() == [[1]]
    assert acts[(0, -1)].matrix.shape == (0, 1)


def test_induced_action_needs_integral_lifts():
    d = get_link("unknot").with_markings([(1, 0)])
    cube = build_cube(d)
    with pytest.raises(ValueError):
        induced_action(kh(d, QQ), basepoint_operator(cube, 0), cube.complex)


def test_induced_action_detects_bad_operator():
    d = get_link("unknot").with_markings([(1, 0)])
    cube = build_cube(d)
    bogus = {0: IntMatrix.from_dense([[0, 1], [0, 0]])}  # raises q
    with pytest.raises(InvariantError):
        induced_action(kh(d), bogus, cube.complex)


@pytest.mark.parametrize("lid", ["hopf", "trefoil", "figure-eight", "unlink:3"])
def test_module_relations(lid):
    d = get_link(lid)
    d = d.with_markings(d.one_marking_per_component() + ((min(d.components[0]) + 1 if d.n else 1, 1),))
    cube = build_cube(d)
    mod = assemble_module(kh(d), cube.complex, [basepoint_operator(cube, i) for i in range(len(d.markings))])
    for X in mod.endos:
        assert (X @ X).is_zero()
    for X, Y in itertools.combinations(mod.endos, 2):
        assert (X @ Y).equals(Y @ X)


def test_unlink_regular_representation():
    d = get_link("unlink:2")
    d = d.with_markings(d.one_marking_per_component())
    cube = build_cube(d)
    mod = assemble_module(kh(d), cube.complex, [basepoint_operator(cube, i) for i in range(2)])
    top = mod.grading.index((0, 2))
    g = [0] * mod.group.gens
    g[top] = 1
    X1, X2 = (e.matrix for e in mod.endos)
    cols = [g, X1.apply(g), X2.apply(g), X1.apply(X2.apply(g))]
    from khoszul.algebra import elementary_divisors

    assert elementary_divisors(IntMatrix.from_columns(4, cols)) == (1, 1, 1, 1)


def test_reduced_unknot():
    d = get_link("unknot").with_markings((), (1, 0))
    sub, keep = reduced_complex(build_cube(d))
    assert sub.total_rank == 1
    H = complex_homology(sub, ZZ)
    assert H.groups[(0, 0)] == PresentedGroup.free(1)


def test_reduced_needs_basepoint():
    with pytest.raises(ValueError):
        reduced_complex(build_cube(get_link("hopf")))


@pytest.mark.parametrize("lid, rank", [("trefoil", 3), ("hopf", 2), ("figure-eight", 5)])
def test_reduced_ranks(lid, rank):
    d = get_link(lid)
    sub, _ = reduced_complex(build_cube(d), Marking(1, 0))
    assert complex_homology(sub, QQ).total_rank == rank


def test_reduced_vertex_rank_halves():
    d = get_link("trefoil")
    cube = build_cube(d)
    sub, keep = reduced_complex(cube, Marking(1, 0))
    assert sub.total_rank * 2 == cube.complex.total_rank
