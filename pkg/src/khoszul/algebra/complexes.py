"""Bigraded cochain complexes of free abelian groups.

Generators carry a homological degree (the dict key) and a quantum degree.
The differential raises homological degree by one and preserves the
quantum degree, so homology is computed block by block.
"""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, Sequence

from .fields import Coefficients, FieldHomology, change_coefficients, field_homology
from .groups import AlgebraError, HomologyResult, PresentedGroup, homology_at
from .matrix import IntMatrix


class InvariantError(AssertionError):
    """An internal consistency check failed (d∘d ≠ 0, non-chain map, ...)."""


def thread_cap() -> int:
    try:
        return max(1, int(os.environ.get("KHOSZUL_THREADS", "1")))
    except ValueError:
        return 1


def pmap(fn: Callable, items: Sequence) -> list:
    """Map honouring KHOSZUL_THREADS (worker processes; 1 means serial)."""
    n = thread_cap()
    if n <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


@dataclass
class FreeChainComplex:
    """``C^h = Z^{rank h}`` with ``diffs[h]: C^h -> C^{h+1}``.

    ``qdeg[h][i]`` is the quantum degree of generator i in degree h;
    ``labels[h][i]`` is an opaque basis label.  ``filtration`` optionally
    records a filtration degree per generator.
    """

    qdeg: dict[int, list[int]]
    diffs: dict[int, IntMatrix]
    labels: dict[int, list[Any]] = field(default_factory=dict)
    filtration: dict[int, list[int]] | None = None

    def __post_init__(self):
        for h, M in self.diffs.items():
            if M.shape != (self.rank(h + 1), self.rank(h)):
                raise AlgebraError(f"differential at degree {h} has shape {M.shape}, "
                                   f"expected {(self.rank(h + 1), self.rank(h))}")

    def rank(self, h: int) -> int:
        return len(self.qdeg.get(h, ()))

    @property
    def degrees(self) -> list[int]:
        return sorted(h for h in self.qdeg if self.qdeg[h])

    def d(self, h: int) -> IntMatrix:
        M = self.diffs.get(h)
        return M if M is not None else IntMatrix(self.rank(h + 1), self.rank(h))

    @property
    def total_rank(self) -> int:
        return sum(len(v) for v in self.qdeg.values())

    def bidegrees(self) -> list[tuple[int, int]]:
        return sorted({(h, q) for h, qs in self.qdeg.items() for q in qs})

    def indices(self, h: int, q: int) -> list[int]:
        return [i for i, x in enumerate(self.qdeg.get(h, ())) if x == q]

    def block(self, h: int, q: int) -> tuple[IntMatrix, IntMatrix, list[int]]:
        """(d_in, d_out, middle indices) restricted to quantum degree q."""
        mid = self.indices(h, q)
        prev = self.indices(h - 1, q)
        nxt = self.indices(h + 1, q)
        d_in = self.d(h - 1).submatrix(mid, prev)
        d_out = self.d(h).submatrix(nxt, mid)
        return d_in, d_out, mid

    def check_d_squared(self) -> None:
        for h in self.degrees:
            comp = self.d(h + 1) @ self.d(h)
            if not comp.is_zero():
                r, c, v = comp.first_nonzero()
                raise InvariantError(f"d∘d != 0 at degree {h}: entry ({r}, {c}) = {v}")

    def euler_characteristic(self) -> dict[int, int]:
        """Graded Euler characteristic as {q: coefficient}."""
        out: dict[int, int] = defaultdict(int)
        for h, qs in self.qdeg.items():
            for q in qs:
                out[q] += (-1) ** (h % 2)
        return {q: v for q, v in sorted(out.items()) if v}

    def subcomplex(self, keep: dict[int, list[int]]) -> tuple["FreeChainComplex", dict[int, list[int]]]:
        """Restriction to the given generator indices (caller guarantees closure)."""
        qdeg = {h: [self.qdeg[h][i] for i in idx] for h, idx in keep.items()}
        labels = {h: [self.labels[h][i] for i in idx] for h, idx in keep.items() if h in self.labels}
        diffs = {}
        for h in keep:
            if h + 1 in keep:
                full = self.d(h)
                sub = full.submatrix(keep[h + 1], keep[h])
                # every column must stay inside the subcomplex
                kept_rows = set(keep[h + 1])
                for c_new, c_old in enumerate(keep[h]):
                    for r in full.column(c_old):
                        if r not in kept_rows:
                            raise InvariantError(f"not a subcomplex at degree {h}, generator {c_old}")
                diffs[h] = sub
            elif self.rank(h + 1):
                full = self.d(h).submatrix(range(self.rank(h + 1)), keep[h])
                if not full.is_zero():
                    raise InvariantError(f"not a subcomplex at degree {h}")
        return FreeChainComplex(qdeg, diffs, labels), keep


def _homology_block(args):
    d_in, d_out = args
    return homology_at(d_in, d_out)


def _field_block(args):
    d_in, d_out, c = args
    return field_homology(d_in, d_out, c)


@dataclass
class GradedHomology:
    """Homology per bidegree (h, q).

    Over Z and Z[1/2] ``groups`` holds abelian groups (for Z[1/2] the odd
    part of the torsion, as a Z-module whose localization is the answer).
    Over a field ``dims`` holds dimensions.  ``integral`` keeps the Z-level
    results with lifts when available; ``field_data`` does the same for
    field computations.
    """

    coefficients: Coefficients
    groups: dict[tuple[int, int], PresentedGroup] = field(default_factory=dict)
    dims: dict[tuple[int, int], int] = field(default_factory=dict)
    integral: dict[tuple[int, int], HomologyResult] = field(default_factory=dict, repr=False)
    field_data: dict[tuple[int, int], FieldHomology] = field(default_factory=dict, repr=False)
    indices: dict[tuple[int, int], list[int]] = field(default_factory=dict, repr=False)

    def rank(self, h: int, q: int) -> int:
        if self.coefficients.is_field:
            return self.dims.get((h, q), 0)
        g = self.groups.get((h, q))
        return g.free_rank if g is not None else 0

    def bidegrees(self) -> list[tuple[int, int]]:
        if self.coefficients.is_field:
            return sorted(k for k, v in self.dims.items() if v)
        return sorted(k for k, g in self.groups.items() if not g.is_trivial())

    @property
    def total_rank(self) -> int:
        return sum(self.rank(*b) for b in self.bidegrees())

    def torsion(self) -> list[int]:
        out = []
        for b in self.bidegrees():
            if not self.coefficients.is_field:
                out.extend(self.groups[b].torsion)
        return sorted(out)

    def by_degree(self) -> dict[int, int]:
        """Rank (or dimension) summed over quantum degrees."""
        out: dict[int, int] = defaultdict(int)
        for h, q in self.bidegrees():
            out[h] += self.rank(h, q)
        return dict(sorted(out.items()))

    def poincare(self) -> dict[tuple[int, int], int]:
        return {b: self.rank(*b) for b in self.bidegrees() if self.rank(*b)}

    def table(self) -> list[dict]:
        rows = []
        for h, q in self.bidegrees():
            row = {"h": h, "q": q, "rank": self.rank(h, q)}
            if not self.coefficients.is_field:
                row["torsion"] = list(self.groups[(h, q)].torsion)
            rows.append(row)
        return rows


def complex_homology(C: FreeChainComplex, c: Coefficients, lifts: bool = True) -> GradedHomology:
    """Homology of C in every bidegree."""
    bideg = C.bidegrees()
    blocks = [C.block(h, q) for h, q in bideg]
    out = GradedHomology(c)
    for b, (_, _, mid) in zip(bideg, blocks):
        out.indices[b] = mid
    if c.is_field:
        res = pmap(_field_block, [(di, do, c) for di, do, _ in blocks])
        for b, r in zip(bideg, res):
            out.dims[b] = r.dim
            if lifts:
                out.field_data[b] = r
        return out
    res = pmap(_homology_block, [(di, do) for di, do, _ in blocks])
    for b, r in zip(bideg, res):
        if c.kind == "Zhalf":
            rep = change_coefficients(r.group, c)
            out.groups[b] = PresentedGroup.from_invariants(rep.rank, rep.torsion)
        else:
            out.groups[b] = r.group
        if lifts:
            out.integral[b] = r
    return out


def chain_map_check(C: FreeChainComplex, maps: dict[int, IntMatrix], name: str = "map") -> None:
    """Raise InvariantError unless ``maps`` commutes with d and squares to zero."""
    for h in C.degrees:
        X = maps.get(h, IntMatrix(C.rank(h), C.rank(h)))
        Xn = maps.get(h + 1, IntMatrix(C.rank(h + 1), C.rank(h + 1)))
        if not (C.d(h) @ X - Xn @ C.d(h)).is_zero():
            raise InvariantError(f"{name} does not commute with d at degree {h}")
        if not (X @ X).is_zero():
            raise InvariantError(f"{name} does not square to zero at degree {h}")


def iter_pairs(items: Iterable) -> Iterable[tuple]:
    items = list(items)
    for i in range(len(items)):
        for j in range(i + 1, len(items)):
            yield items[i], items[j]
