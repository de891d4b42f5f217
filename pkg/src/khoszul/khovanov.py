"""Khovanov cube of resolutions, basepoint operators, and the module action.

Conventions: homological degree ``h = |v| - n_-``; quantum degree
``q = #v+ - #v- + |v| + n_+ - 2 n_-``; the edge flipping crossing c gets
sign ``(-1)^(number of 1s before c)``.  Tensor factors are ordered by the
smallest arc label on each circle.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    ZZ,
    Coefficients,
    Field,
    FreeChainComplex,
    GradedHomology,
    GroupMorphism,
    IntMatrix,
    InvariantError,
    PresentedGroup,
    chain_map_check,
    complex_homology,
    direct_sum,
)
from .algebra.fields import apply as field_apply
from .algebra.fields import column_vectors
from .link import LinkDiagram, Marking, ResolvedState, resolve

PLUS, MINUS = 0, 1


@dataclass
class KhovanovCube:
    diagram: LinkDiagram
    states: dict[tuple[int, ...], ResolvedState]
    complex: FreeChainComplex
    index: dict[tuple, tuple[int, int]] = field(repr=False)
    edges: list[tuple[tuple[int, ...], int, str, int]] = field(repr=False, default_factory=list)

    @property
    def vertices(self) -> list[tuple[int, ...]]:
        return list(self.states)

    def vertex_rank(self, v: tuple[int, ...]) -> int:
        return 2 ** self.states[v].n_circles

    def homological_degree(self, v: Sequence[int]) -> int:
        return sum(v) - self.diagram.n_minus


def _qdeg(lab: tuple[int, ...], weight: int, d: LinkDiagram) -> int:
    minus = sum(lab)
    return (len(lab) - minus) - minus + weight + d.n_plus - 2 * d.n_minus


def _edge_images(d: LinkDiagram, s0: ResolvedState, s1: ResolvedState, c: int):
    """Return (kind, function lab -> list of target labs) for the edge flipping c."""
    i, j, k, l = d.crossings[c]
    A, B = s0.circle_of_arc[i], s0.circle_of_arc[k]
    # circles away from c keep their arcs
    carry = {}
    for idx, circ in enumerate(s0.circles):
        if idx not in (A, B):
            carry[idx] = s1.circle_of_arc[circ[0]]
    n1 = s1.n_circles
    if A != B:
        C = s1.circle_of_arc[i]

        def merge(lab):
            out = [0] * n1
            for src, dst in carry.items():
                out[dst] = lab[src]
            a, b = lab[A], lab[B]
            if a == MINUS and b == MINUS:
                return []
            out[C] = MINUS if (a == MINUS or b == MINUS) else PLUS
            return [tuple(out)]

        return "merge", merge
    C1, C2 = s1.circle_of_arc[i], s1.circle_of_arc[j]

    def split(lab):
        base = [0] * n1
        for src, dst in carry.items():
            base[dst] = lab[src]
        outs = []
        if lab[A] == PLUS:
            for x, y in ((PLUS, MINUS), (MINUS, PLUS)):
                t = list(base)
                t[C1], t[C2] = x, y
                outs.append(tuple(t))
        else:
            t = list(base)
            t[C1] = t[C2] = MINUS
            outs.append(tuple(t))
        return outs

    return "split", split


def build_cube(d: LinkDiagram, check: bool = True) -> KhovanovCube:
    """Cube of resolutions as a bigraded complex over Z (d∘d = 0 is asserted)."""
    n = d.n
    vertices = list(itertools.product((0, 1), repeat=n))
    states = {v: resolve(d, v) for v in vertices}
    qdeg: dict[int, list[int]] = {}
    labels: dict[int, list] = {}
    index: dict[tuple, tuple[int, int]] = {}
    for v in vertices:  # lexicographic, so each degree list is ordered too
        h = sum(v) - d.n_minus
        k = states[v].n_circles
        for lab in itertools.product((PLUS, MINUS), repeat=k):
            lst = labels.setdefault(h, [])
            index[(v, lab)] = (h, len(lst))
            lst.append((v, lab))
            qdeg.setdefault(h, []).append(_qdeg(lab, sum(v), d))
    entries: dict[int, dict[tuple[int, int], int]] = {}
    edges = []
    for v in vertices:
        h = sum(v) - d.n_minus
        for c in range(n):
            if v[c]:
                continue
            w = v[:c] + (1,) + v[c + 1:]
            sign = -1 if sum(v[:c]) % 2 else 1
            kind, fn = _edge_images(d, states[v], states[w], c)
            edges.append((v, c, kind, sign))
            tgt = entries.setdefault(h, {})
            for lab in itertools.product((PLUS, MINUS), repeat=states[v].n_circles):
                _, col = index[(v, lab)]
                for lab2 in fn(lab):
                    _, row = index[(w, lab2)]
                    tgt[(row, col)] = tgt.get((row, col), 0) + sign
    diffs = {}
    for h, ent in entries.items():
        diffs[h] = IntMatrix(len(qdeg.get(h + 1, ())), len(qdeg[h]), ent)
    C = FreeChainComplex(qdeg, diffs, labels)
    cube = KhovanovCube(d, states, C, index, edges)
    if check:
        C.check_d_squared()
        for h, M in diffs.items():
            for (r, c), _ in M.items():
                if C.qdeg[h + 1][r] != C.qdeg[h][c]:
                    raise InvariantError(f"differential changes quantum degree at degree {h}")
    return cube


def kh(d: LinkDiagram, c: Coefficients = ZZ, lifts: bool | None = None) -> GradedHomology:
    """Khovanov homology of the diagram over the given coefficients."""
    cube = build_cube(d)
    return complex_homology(cube.complex, c, lifts=(c.kind == "Z") if lifts is None else lifts)


# ------------------------------------------------------------------ X_p


@dataclass
class BasepointOperator:
    """Chain endomorphism ``X_p``: v+ -> v-, v- -> 0 on the circle through p."""

    marking: Marking
    matrices: dict[int, IntMatrix]
    circles: dict[tuple[int, ...], int] = field(default_factory=dict, repr=False)
    sign: int = 1

    def vertex_matrix(self, cube: KhovanovCube, v: tuple[int, ...]) -> IntMatrix:
        """Action on ``V^{⊗ circles(v)}`` in the vertex basis order."""
        k = cube.states[v].n_circles
        labs = list(itertools.product((PLUS, MINUS), repeat=k))
        pos = {lab: i for i, lab in enumerate(labs)}
        circ = self.circles[v]
        ent = {}
        for lab in labs:
            if lab[circ] == PLUS:
                tgt = lab[:circ] + (MINUS,) + lab[circ + 1:]
                ent[(pos[tgt], pos[lab])] = self.sign
        return IntMatrix(len(labs), len(labs), ent)

    def restrict(self, keep: dict[int, list[int]]) -> "BasepointOperator":
        mats = {h: self.matrices[h].submatrix(idx, idx) for h, idx in keep.items() if h in self.matrices}
        return BasepointOperator(self.marking, mats, self.circles, self.sign)

    def scale(self, k: int) -> "BasepointOperator":
        return BasepointOperator(self.marking, {h: M.scale(k) for h, M in self.matrices.items()},
                                 self.circles, self.sign * k)


def _resolve_marking(d: LinkDiagram, marking: int | Marking | tuple) -> Marking:
    if isinstance(marking, int) and not isinstance(marking, bool):
        if not 0 <= marking < len(d.markings):
            raise IndexError(f"marking index {marking} out of range (diagram has {len(d.markings)})")
        return d.markings[marking]
    m = Marking(*marking)
    if not 1 <= m.arc <= d.n_arcs:
        raise IndexError(f"marking {m} references missing arc")
    return m


def arc_parity(d: LinkDiagram, arc: int) -> int:
    """+1 / -1 by the position of ``arc`` along its component."""
    comp = d.components[d.component_of_arc[arc]]
    return -1 if comp.index(arc) % 2 else 1


def basepoint_operator(cube: KhovanovCube, marking: int | Marking, check: bool = True,
                       normalized: bool = True) -> BasepointOperator:
    """``X_p`` on the whole cube.

    Over Z the raw operators on the two sides of a crossing are homotopic
    to minus each other.  With ``normalized`` the operator is multiplied by
    :func:`arc_parity`, so markings on one component induce the same map.
    """
    d = cube.diagram
    m = _resolve_marking(d, marking)
    sign = arc_parity(d, m.arc) if normalized else 1
    circles = {v: s.circle_of_arc[m.arc] for v, s in cube.states.items()}
    ent: dict[int, dict] = {}
    for (v, lab), (h, idx) in cube.index.items():
        circ = circles[v]
        if lab[circ] == PLUS:
            tgt = lab[:circ] + (MINUS,) + lab[circ + 1:]
            ent.setdefault(h, {})[(cube.index[(v, tgt)][1], idx)] = sign
    C = cube.complex
    mats = {h: IntMatrix(C.rank(h), C.rank(h), ent.get(h, {})) for h in C.degrees}
    op = BasepointOperator(m, mats, circles, sign)
    if check:
        chain_map_check(C, mats, name=f"X_{m}")
    return op


def reduced_complex(cube: KhovanovCube, basepoint: Marking | None = None) -> tuple[FreeChainComplex, dict[int, list[int]]]:
    """Subcomplex ``ker X_{p0}``: generators labelling the basepoint circle v-.

    Quantum degrees are shifted by +1 so the reduced unknot sits at q = 0.
    Returns the subcomplex and the kept generator indices per degree.
    """
    d = cube.diagram
    bp = basepoint if basepoint is not None else d.basepoint
    if bp is None:
        raise ValueError("reduced complex needs a basepoint")
    bp = Marking(*bp)
    keep: dict[int, list[int]] = {}
    C = cube.complex
    for h in C.degrees:
        idx = []
        for i, (v, lab) in enumerate(C.labels[h]):
            if lab[cube.states[v].circle_of_arc[bp.arc]] == MINUS:
                idx.append(i)
        keep[h] = idx
    sub, keep = C.subcomplex(keep)
    sub.qdeg = {h: [q + 1 for q in qs] for h, qs in sub.qdeg.items()}
    sub.check_d_squared()
    return sub, keep


# ------------------------------------------------------- induced action


def induced_action(hom: GradedHomology, op: BasepointOperator | dict[int, IntMatrix],
                   complex_: FreeChainComplex) -> dict[tuple[int, int], GroupMorphism]:
    """Induced maps ``H^{h,q} -> H^{h,q-2}`` over Z, one per nonzero bidegree."""
    mats = op.matrices if isinstance(op, BasepointOperator) else op
    if hom.coefficients.kind != "Z" or not hom.integral:
        raise ValueError("induced_action needs integral homology with lifts")
    out = {}
    for (h, q), res in hom.integral.items():
        src = hom.groups[(h, q)]
        mid = hom.indices[(h, q)]
        tgt_b = (h, q - 2)
        tgt = hom.groups.get(tgt_b, PresentedGroup(0))
        X = mats.get(h)
        cols = []
        for j in range(src.gens):
            lift_col = res.lift.column(j)
            full = [0] * complex_.rank(h)
            for r, v in lift_col.items():
                full[mid[r]] = v
            image = X.apply(full) if X is not None else [0] * complex_.rank(h)
            if tgt_b in hom.integral:
                tmid = hom.indices[tgt_b]
                sub = [image[i] for i in tmid]
                rest = set(range(len(image))) - set(tmid)
                if any(image[i] for i in rest):
                    raise InvariantError(f"operator does not lower quantum degree by 2 at {(h, q)}")
                try:
                    cols.append(hom.integral[tgt_b].project(sub))
                except Exception as e:  # noqa: BLE001
                    raise InvariantError(f"lifted class at {(h, q)} does not map to a cycle: {e}") from None
            else:
                if any(image):
                    raise InvariantError(f"operator maps {(h, q)} outside the complex")
                cols.append([])
        M = IntMatrix.from_columns(tgt.gens, cols) if tgt.gens else IntMatrix(0, src.gens)
        out[(h, q)] = GroupMorphism(src, tgt, M)
    return out


@dataclass
class HomologyModule:
    """``Kh`` as one presented group with commuting endomorphisms.

    ``grading[i]`` is the bidegree of generator i of ``group``.
    """

    group: PresentedGroup
    endos: list[GroupMorphism]
    grading: list[tuple[int, int]]
    blocks: list[tuple[tuple[int, int], int, int]]  # (bidegree, offset, size)


def assemble_module(hom: GradedHomology, complex_: FreeChainComplex,
                    ops: Sequence[BasepointOperator], factor: int = 1) -> HomologyModule:
    bideg = [b for b in sorted(hom.groups) if hom.groups[b].gens]
    blocks, off = [], 0
    for b in bideg:
        g = hom.groups[b].gens
        blocks.append((b, off, g))
        off += g
    offset = {b: o for b, o, _ in blocks}
    M = direct_sum([hom.groups[b] for b in bideg]) if bideg else PresentedGroup(0)
    grading = [b for b, _, g in blocks for _ in range(g)]
    endos = []
    for op in ops:
        acts = induced_action(hom, op, complex_)
        ent = {}
        for b in bideg:
            f = acts[b]
            t = (b[0], b[1] - 2)
            for (r, c), v in f.matrix.items():
                ent[(offset[t] + r, offset[b] + c)] = factor * v
        endos.append(GroupMorphism(M, M, IntMatrix(M.gens, M.gens, ent)))
    return HomologyModule(M, endos, grading, blocks)


@dataclass
class FieldModule:
    """Homology over a field with induced operator matrices (column dicts)."""

    field: Field
    grading: list[tuple[int, int]]
    endos: list[list[dict]]

    @property
    def dim(self) -> int:
        return len(self.grading)


def field_module(hom: GradedHomology, complex_: FreeChainComplex,
                 ops: Sequence[BasepointOperator], factor: int = 1) -> FieldModule:
    F = Field.of(hom.coefficients)
    bideg = [b for b in sorted(hom.field_data) if hom.field_data[b].dim]
    offset, grading = {}, []
    for b in bideg:
        offset[b] = len(grading)
        grading.extend([b] * hom.field_data[b].dim)
    endos = []
    for op in ops:
        cols: list[dict] = []
        for b in bideg:
            h, q = b
            fd = hom.field_data[b]
            mid = hom.indices[b]
            X = column_vectors(op.matrices[h]) if h in op.matrices else None
            t = (h, q - 2)
            for z in fd.lifts:
                full = {mid[i]: x for i, x in z.items()}
                image = field_apply(X, full, F) if X is not None else {}
                col: dict = {}
                if image:
                    if t not in hom.field_data:
                        raise InvariantError(f"operator maps {b} outside the complex")
                    tmid = {g: i for i, g in enumerate(hom.indices[t])}
                    sub = {tmid[g]: x for g, x in image.items()}
                    coords = hom.field_data[t].project(sub)
                    col = {offset[t] + i: F.norm(factor * x) for i, x in enumerate(coords) if F.norm(factor * x)}
                cols.append(col)
        endos.append(cols)
    return FieldModule(F, grading, endos)
