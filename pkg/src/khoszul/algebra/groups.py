"""Finitely generated abelian groups given by presentations, and homology.

A :class:`PresentedGroup` is ``Z^gens / im(rels)`` where the columns of
``rels`` are relations.  Equality of groups is isomorphism, decided through
the canonical form ``(free rank, divisor chain)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Sequence

from .matrix import IntMatrix, SmithDecomposition, elementary_divisors, hstack, snf


class AlgebraError(ValueError):
    """Raised when an algebraic precondition fails (d∘d ≠ 0, ill-defined map, ...)."""


@dataclass(frozen=True, eq=False)
class PresentedGroup:
    gens: int
    rels: IntMatrix = None  # type: ignore[assignment]

    def __post_init__(self):
        if self.rels is None:
            object.__setattr__(self, "rels", IntMatrix(self.gens, 0))
        if self.rels.rows != self.gens:
            raise AlgebraError(f"relation matrix has {self.rels.rows} rows, expected {self.gens}")

    @classmethod
    def free(cls, n: int) -> "PresentedGroup":
        return cls(n)

    @classmethod
    def from_invariants(cls, free_rank: int, torsion: Sequence[int] = ()) -> "PresentedGroup":
        """Group Z/t_1 + ... + Z/t_k + Z^free_rank, torsion generators first."""
        torsion = [t for t in torsion if t != 1]
        if any(t < 2 for t in torsion):
            raise AlgebraError(f"torsion orders must be >= 2, got {torsion}")
        k = len(torsion)
        rels = IntMatrix.diagonal(torsion, k + free_rank, k)
        return cls(k + free_rank, rels)

    @cached_property
    def invariants(self) -> tuple[int, tuple[int, ...]]:
        ds = elementary_divisors(self.rels)
        return self.gens - len(ds), tuple(sorted(d for d in ds if d > 1))

    @property
    def free_rank(self) -> int:
        return self.invariants[0]

    @property
    def torsion(self) -> tuple[int, ...]:
        return self.invariants[1]

    def is_free(self) -> bool:
        return not self.torsion

    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    @property
    def min_generators(self) -> int:
        return self.free_rank + len(self.torsion)

    def canonical(self) -> "PresentedGroup":
        return PresentedGroup.from_invariants(*self.invariants)

    def direct_sum(self, other: "PresentedGroup") -> "PresentedGroup":
        from .matrix import block_diag

        return PresentedGroup(self.gens + other.gens, block_diag([self.rels, other.rels]))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PresentedGroup):
            return NotImplemented
        return self.invariants == other.invariants

    def __hash__(self) -> int:
        return hash(self.invariants)

    def __str__(self) -> str:
        return format_group(*self.invariants)

    def __repr__(self) -> str:
        return f"PresentedGroup({self})"


def format_group(free_rank: int, torsion: Sequence[int], ring: str = "Z") -> str:
    parts = [f"{ring}/{t}" for t in torsion]
    if free_rank:
        parts.append(ring if free_rank == 1 else f"{ring}^{free_rank}")
    return " + ".join(parts) if parts else "0"


def direct_sum(groups: Sequence[PresentedGroup]) -> PresentedGroup:
    from .matrix import block_diag

    return PresentedGroup(sum(g.gens for g in groups), block_diag([g.rels for g in groups]))


# --------------------------------------------------------------------------
# lattice helpers


class _LatticeSolver:
    """Solves ``B y = w`` over Z for a fixed B, reusing one SNF."""

    def __init__(self, B: IntMatrix):
        self.B = B
        self.S = snf(B)

    def solve(self, w: Sequence[int]) -> list[int] | None:
        S = self.S
        u = S.U.apply(w)
        r = S.rank
        if any(u[i] for i in range(r, len(u))):
            return None
        z = [0] * self.B.cols
        for i, d in enumerate(S.divisors):
            q, rem = divmod(u[i], d)
            if rem:
                return None
            z[i] = q
        return S.V.apply(z)

    def contains(self, w: Sequence[int]) -> bool:
        if not any(w):
            return True
        return self.solve(w) is not None


def solve_lattice(B: IntMatrix, W: IntMatrix) -> IntMatrix:
    """Integer Y with ``B @ Y == W``; raises AlgebraError if none exists."""
    solver = _LatticeSolver(B)
    cols = []
    dense = W.to_dense()
    for j in range(W.cols):
        w = [dense[i][j] for i in range(W.rows)]
        y = solver.solve(w)
        if y is None:
            raise AlgebraError(f"column {j} is not in the lattice spanned by B")
        cols.append(y)
    return IntMatrix.from_columns(B.cols, cols)


def kernel_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of ker M (saturated)."""
    S = snf(M)
    return S.V.submatrix(range(M.cols), range(S.rank, M.cols))


def image_basis(M: IntMatrix) -> IntMatrix:
    """Columns form a Z-basis of im M."""
    S = snf(M)
    cols = []
    for i, d in enumerate(S.divisors):
        cols.append({r: d * v for r, v in S.U_inv.column(i).items()})
    return IntMatrix.from_columns(M.rows, cols)


def _first_violation(M: IntMatrix) -> str:
    hit = M.first_nonzero()
    if hit is None:
        return ""
    r, c, v = hit
    return f"entry ({r}, {c}) = {v}"


# --------------------------------------------------------------------------
# morphisms


@dataclass(frozen=True, eq=False)
class GroupMorphism:
    source: PresentedGroup
    target: PresentedGroup
    matrix: IntMatrix
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        if self.matrix.shape != (self.target.gens, self.source.gens):
            raise AlgebraError(
                f"matrix shape {self.matrix.shape} does not fit {self.source.gens} -> {self.target.gens} generators"
            )
        if self.check and self.source.rels.cols:
            image = self.matrix @ self.source.rels
            if not in_span(self.target.rels, image):
                raise AlgebraError("morphism does not respect relations of the source")

    def __matmul__(self, other: "GroupMorphism") -> "GroupMorphism":
        return GroupMorphism(other.source, self.target, self.matrix @ other.matrix, check=False)

    def __add__(self, other: "GroupMorphism") -> "GroupMorphism":
        return GroupMorphism(self.source, self.target, self.matrix + other.matrix, check=False)

    def __sub__(self, other: "GroupMorphism") -> "GroupMorphism":
        return GroupMorphism(self.source, self.target, self.matrix - other.matrix, check=False)

    def scale(self, k: int) -> "GroupMorphism":
        return GroupMorphism(self.source, self.target, self.matrix.scale(k), check=False)

    def is_zero(self) -> bool:
        """True when every generator maps into the relation lattice."""
        return in_span(self.target.rels, self.matrix)

    def equals(self, other: "GroupMorphism") -> bool:
        return (self - other).is_zero()

    @classmethod
    def zero(cls, source: PresentedGroup, target: PresentedGroup) -> "GroupMorphism":
        return cls(source, target, IntMatrix(target.gens, source.gens), check=False)

    @classmethod
    def identity(cls, group: PresentedGroup) -> "GroupMorphism":
        return cls(group, group, IntMatrix.identity(group.gens), check=False)


def in_span(B: IntMatrix, W: IntMatrix) -> bool:
    """Whether every column of W lies in the Z-span of the columns of B."""
    if W.is_zero():
        return True
    if B.cols == 0:
        return False
    solver = _LatticeSolver(B)
    dense = W.to_dense()
    return all(solver.contains([dense[i][j] for i in range(W.rows)]) for j in range(W.cols))


# --------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyResult:
    """``ker(d_out) / im(d_in)`` with generator lifts.

    ``lift`` has one column per generator of ``group``; each column is a
    cycle in the middle term.  Torsion generators come first.
    """

    group: PresentedGroup
    lift: IntMatrix
    _kernel_rank: int = field(repr=False, default=0)
    _out: SmithDecomposition | None = field(repr=False, default=None)
    _inner: SmithDecomposition | None = field(repr=False, default=None)
    _keep: tuple[int, ...] = field(repr=False, default=())

    def __iter__(self):
        yield self.group
        yield self.lift

    def project(self, z: Sequence[int]) -> list[int]:
        """Coordinates of the homology class of cycle ``z`` in ``group`` generators."""
        Vinv = self._out.V_inv
        r = self._out.rank
        y = Vinv.apply(z)
        if any(y[i] for i in range(r)):
            raise AlgebraError("vector is not a cycle")
        y = y[r:]
        yp = self._inner.U.apply(y) if self._inner is not None else y
        divs = self._inner.divisors if self._inner is not None else ()
        coords = []
        for i in self._keep:
            if i < len(divs):
                coords.append(yp[i] % divs[i])
            else:
                coords.append(yp[i])
        return coords


def homology_at(d_in: IntMatrix, d_out: IntMatrix) -> HomologyResult:
    """Homology of ``C_prev --d_in--> C --d_out--> C_next`` at the middle term."""
    if d_in.rows != d_out.cols:
        raise AlgebraError(f"middle dimensions disagree: {d_in.rows} vs {d_out.cols}")
    comp = d_out @ d_in
    if not comp.is_zero():
        raise AlgebraError(f"d_out @ d_in != 0: {_first_violation(comp)}")
    m = d_out.cols
    So = snf(d_out)
    r_o = So.rank
    kernel = So.V.submatrix(range(m), range(r_o, m))
    k = m - r_o
    A = (So.V_inv @ d_in).submatrix(range(r_o, m), range(d_in.cols))
    Si = snf(A)
    divs = Si.divisors
    keep = [i for i, d in enumerate(divs) if d > 1] + list(range(len(divs), k))
    torsion = [divs[i] for i in keep if i < len(divs)]
    group = PresentedGroup.from_invariants(len(keep) - len(torsion), torsion)
    basis = kernel @ Si.U_inv
    lift = basis.submatrix(range(m), keep)
    return HomologyResult(group, lift, k, So, Si, tuple(keep))


def presented_homology_at(f: GroupMorphism, g: GroupMorphism) -> PresentedGroup:
    """``ker(g) / im(f)`` for morphisms of presented groups ``A -f-> B -g-> C``."""
    B = f.target
    if g.source.gens != B.gens:
        raise AlgebraError("f and g are not composable")
    comp = g.matrix @ f.matrix
    if not in_span(g.target.rels, comp):
        raise AlgebraError("g ∘ f is not zero modulo the relations of the target")
    b = B.gens
    # x in ker g  <=>  g x = R_C y for some y
    stacked = hstack([g.matrix, g.target.rels.scale(-1)]) if g.target.rels.cols else g.matrix
    K_full = kernel_basis(stacked)
    K = K_full.submatrix(range(b), range(K_full.cols))
    Kb = image_basis(K)
    W = hstack([f.matrix, B.rels])
    Y = solve_lattice(Kb, W)
    divs = elementary_divisors(Y)
    return PresentedGroup.from_invariants(Kb.cols - len(divs), [d for d in divs if d > 1])
