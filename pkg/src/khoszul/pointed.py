"""Pointed Khovanov complexes ``Λ_p ⊗ CKh(L)``.

A generator is ``y_S ⊗ b`` with S a strictly increasing tuple of marking
indices.  The differential is

    d(y_S ⊗ b) = (-1)^|S| y_S ⊗ d_Kh b + Σ_{i∉S} c · y_i ∧ y_S ⊗ X_i b

with c = 1 for the standard variant and c = 2 for the doubled one.
Total degree is ``h + |S|`` and the quantum degree ``q + 2|S|`` is
preserved, so the usual bidegree machinery applies.  The exterior degree
|S| is stored as the filtration.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from .algebra import (
    ZZ,
    Coefficients,
    FreeChainComplex,
    GradedHomology,
    IntMatrix,
    complex_homology,
)
from .khovanov import BasepointOperator, KhovanovCube, basepoint_operator, build_cube, reduced_complex
from .link import DiagramError, LinkDiagram, Marking

VARIANTS = {"standard": 1, "doubled": 2}


def subsets(l: int) -> list[tuple[int, ...]]:
    """Index sets ordered by size, then lexicographically."""
    return [S for k in range(l + 1) for S in itertools.combinations(range(l), k)]


def wedge_sign(i: int, S: Sequence[int]) -> int:
    """Sign of moving ``y_i`` to its sorted place in ``y_i ∧ y_S``."""
    return -1 if sum(1 for s in S if s < i) % 2 else 1


@dataclass
class PointedComplex:
    diagram: LinkDiagram
    cube: KhovanovCube
    base: FreeChainComplex
    operators: list[BasepointOperator]
    variant: str
    complex: FreeChainComplex
    reduced: bool = False
    keep: dict[int, list[int]] | None = field(default=None, repr=False)

    @property
    def factor(self) -> int:
        return VARIANTS[self.variant]

    @property
    def l(self) -> int:
        return len(self.operators)

    @property
    def markings(self) -> list[Marking]:
        return [op.marking for op in self.operators]

    def chain_ranks(self) -> dict[tuple[int, int], int]:
        """Rank of the chain group per (total degree, exterior degree)."""
        out: dict[tuple[int, int], int] = {}
        for t, ks in self.complex.filtration.items():
            for k in ks:
                out[(t, k)] = out.get((t, k), 0) + 1
        return dict(sorted(out.items()))


def _check_variant(variant: str) -> str:
    v = variant.lower()
    if v not in VARIANTS:
        raise ValueError(f"unknown variant {variant!r}; use standard or doubled")
    return v


def assemble(base: FreeChainComplex, ops: Sequence[BasepointOperator], factor: int) -> FreeChainComplex:
    """Total complex of ``Λ ⊗ base`` with the pointed differential."""
    l = len(ops)
    sets = subsets(l)
    qdeg: dict[int, list[int]] = {}
    labels: dict[int, list] = {}
    filt: dict[int, list[int]] = {}
    pos: dict[tuple, tuple[int, int]] = {}
    for S in sets:
        k = len(S)
        for h in base.degrees:
            for i, q in enumerate(base.qdeg[h]):
                t = h + k
                lst = labels.setdefault(t, [])
                pos[(S, h, i)] = (t, len(lst))
                lst.append((S, h, i))
                qdeg.setdefault(t, []).append(q + 2 * k)
                filt.setdefault(t, []).append(k)
    entries: dict[int, dict] = {}
    base_cols = {h: {} for h in base.degrees}
    for h in base.degrees:
        for (r, c), v in base.d(h).items():
            base_cols[h].setdefault(c, []).append((r, v))
    op_cols = []
    for op in ops:
        cols: dict[int, dict] = {}
        for h, M in op.matrices.items():
            for (r, c), v in M.items():
                cols.setdefault(h, {}).setdefault(c, []).append((r, v))
        op_cols.append(cols)
    for (S, h, i), (t, col) in pos.items():
        ent = entries.setdefault(t, {})
        sgn = -1 if len(S) % 2 else 1
        for r, v in base_cols[h].get(i, ()):
            row = pos[(S, h + 1, r)][1]
            ent[(row, col)] = ent.get((row, col), 0) + sgn * v
        for j in range(l):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            w = factor * wedge_sign(j, S)
            for r, v in op_cols[j].get(h, {}).get(i, ()):
                row = pos[(T, h, r)][1]
                ent[(row, col)] = ent.get((row, col), 0) + w * v
    diffs = {t: IntMatrix(len(qdeg.get(t + 1, ())), len(qdeg[t]), ent)
             for t, ent in entries.items() if t + 1 in qdeg}
    C = FreeChainComplex(qdeg, diffs, labels, filt)
    C.check_d_squared()
    return C


def build_pointed(d: LinkDiagram, variant: str = "standard", cube: KhovanovCube | None = None) -> PointedComplex:
    """Pointed complex over every marking of ``d``."""
    variant = _check_variant(variant)
    cube = cube or build_cube(d)
    ops = [basepoint_operator(cube, i) for i in range(len(d.markings))]
    C = assemble(cube.complex, ops, VARIANTS[variant])
    return PointedComplex(d, cube, cube.complex, ops, variant, C)


def build_reduced_pointed(d: LinkDiagram, basepoint: Marking | tuple | None = None,
                          variant: str = "standard", cube: KhovanovCube | None = None) -> PointedComplex:
    """Same construction on ``ker X_{p0}``; the basepoint is not a marking."""
    variant = _check_variant(variant)
    bp = Marking(*basepoint) if basepoint is not None else d.basepoint
    if bp is None:
        raise DiagramError("reduced pointed complex needs a basepoint")
    if bp in d.markings:
        raise DiagramError(f"basepoint {bp} collides with a marking")
    if not 1 <= bp.arc <= d.n_arcs:
        raise DiagramError(f"basepoint {bp} references missing arc")
    cube = cube or build_cube(d)
    base, keep = reduced_complex(cube, bp)
    ops = [basepoint_operator(cube, i).restrict(keep) for i in range(len(d.markings))]
    C = assemble(base, ops, VARIANTS[variant])
    return PointedComplex(d, cube, base, ops, variant, C, reduced=True, keep=keep)


def pointed_homology(pc: PointedComplex, c: Coefficients = ZZ) -> GradedHomology:
    """Homology of the total complex, bigraded by (total degree, quantum degree)."""
    return complex_homology(pc.complex, c, lifts=False)
