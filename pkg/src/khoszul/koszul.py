"""Koszul complexes of square-zero operators and the exterior-degree spectral sequence.

The integral Koszul complex lives on presented groups, so its homology goes
through :func:`presented_homology_at`.  The spectral sequence is computed
over a field from the filtered pointed complex with the subquotient
formulas

    Z_r^p = {x in F^p : dx in F^{p+r}}
    E_r^p = Z_r^p / (Z_{r-1}^{p+1} + d Z_{r-1}^{p-r+1})

one quantum degree at a time.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

from .algebra import (
    QQ,
    Coefficients,
    Field,
    FreeChainComplex,
    GroupMorphism,
    IntMatrix,
    InvariantError,
    PresentedGroup,
    complex_homology,
    direct_sum,
)
from .algebra.fields import column_vectors, nullspace, span_dim
from .algebra.fields import apply as field_apply
from .algebra.groups import presented_homology_at
from .khovanov import FieldModule, HomologyModule, assemble_module, field_module
from .pointed import PointedComplex, subsets, wedge_sign


class KoszulError(ValueError):
    """Operators fail to commute or to square to zero."""


# ------------------------------------------------------------- integral


@dataclass
class KoszulComplex:
    module: PresentedGroup
    endos: list[GroupMorphism]
    terms: list[PresentedGroup]
    diffs: list[GroupMorphism]
    sets: list[list[tuple[int, ...]]] = field(repr=False, default_factory=list)

    @property
    def l(self) -> int:
        return len(self.endos)


def _check_endos(M: PresentedGroup, endos: Sequence[GroupMorphism]) -> None:
    for i, X in enumerate(endos):
        if X.source.gens != M.gens or X.target.gens != M.gens:
            raise KoszulError(f"X_{i + 1} is not an endomorphism of the module")
        if not (X @ X).is_zero():
            raise KoszulError(f"X_{i + 1} does not square to zero")
    for i in range(len(endos)):
        for j in range(i + 1, len(endos)):
            if not (endos[i] @ endos[j]).equals(endos[j] @ endos[i]):
                raise KoszulError(f"X_{i + 1} and X_{j + 1} do not commute")


def koszul(M: PresentedGroup, endos: Sequence[GroupMorphism], check: bool = True) -> KoszulComplex:
    """``M ⊗ Λ(Z^l)`` with ``d(m ⊗ e_S) = Σ X_i m ⊗ e_i ∧ e_S``."""
    endos = list(endos)
    if check:
        _check_endos(M, endos)
    l = len(endos)
    by_k: list[list[tuple[int, ...]]] = [[] for _ in range(l + 1)]
    for S in subsets(l):
        by_k[len(S)].append(S)
    terms = [direct_sum([M] * len(by_k[k])) for k in range(l + 1)]
    g = M.gens
    diffs = []
    for k in range(l):
        tgt_pos = {S: n for n, S in enumerate(by_k[k + 1])}
        ent: dict = {}
        for n, S in enumerate(by_k[k]):
            for i in range(l):
                if i in S:
                    continue
                T = tgt_pos[tuple(sorted(S + (i,)))]
                s = wedge_sign(i, S)
                for (r, c), v in endos[i].matrix.items():
                    key = (T * g + r, n * g + c)
                    ent[key] = ent.get(key, 0) + s * v
        diffs.append(GroupMorphism(terms[k], terms[k + 1], IntMatrix(terms[k + 1].gens, terms[k].gens, ent)))
    kc = KoszulComplex(M, endos, terms, diffs, by_k)
    if check:
        for k in range(l - 1):
            if not (diffs[k + 1] @ diffs[k]).is_zero():
                raise InvariantError(f"Koszul d∘d != 0 at exterior degree {k}")
    return kc


@dataclass
class KoszulHomology:
    groups: list[PresentedGroup]

    @property
    def total(self) -> PresentedGroup:
        return direct_sum(self.groups) if self.groups else PresentedGroup(0)

    @property
    def rank(self) -> int:
        """Total rank over Q."""
        return sum(G.free_rank for G in self.groups)


def koszul_homology(kc: KoszulComplex) -> KoszulHomology:
    out = []
    zero = PresentedGroup(0)
    for k, T in enumerate(kc.terms):
        f = kc.diffs[k - 1] if k > 0 else GroupMorphism.zero(zero, T)
        g = kc.diffs[k] if k < kc.l else GroupMorphism.zero(T, zero)
        out.append(presented_homology_at(f, g))
    return KoszulHomology(out)


def induced_module(d_or_pc, ops=None, factor: int = 1) -> HomologyModule:
    """Integral homology module of a pointed complex's base with its X's.

    Accepts a :class:`PointedComplex`; the endomorphisms are scaled by the
    variant's factor.
    """
    pc: PointedComplex = d_or_pc
    hom = complex_homology(pc.base, Coefficients("Z"), lifts=True)
    return assemble_module(hom, pc.base, pc.operators, factor=pc.factor)


def pointed_koszul(pc: PointedComplex) -> tuple[HomologyModule, KoszulComplex, KoszulHomology]:
    mod = induced_module(pc)
    kc = koszul(mod.group, mod.endos)
    return mod, kc, koszul_homology(kc)


# ------------------------------------------------------------ over a field


def field_koszul_dims(fm: FieldModule, l: int) -> dict[tuple[int, int, int], int]:
    """Koszul homology of a graded field module, keyed by (k, t, q').

    A basis vector of degree (h, q) tensored with e_S sits at exterior
    degree k = |S|, total degree h + k and quantum degree q + 2k.
    """
    F = fm.field
    sets = subsets(l)
    by_k = defaultdict(list)
    for S in sets:
        by_k[len(S)].append(S)
    # index of (S, basis vector) inside its (k, t, q) block
    blocks: dict[tuple[int, int, int], list[tuple]] = defaultdict(list)
    for S in sets:
        k = len(S)
        for i, (h, q) in enumerate(fm.grading):
            blocks[(k, h + k, q + 2 * k)].append((S, i))
    where = {g: (key, n) for key, gens in blocks.items() for n, g in enumerate(gens)}

    def image(S, i):
        out: dict = {}
        for j in range(l):
            if j in S:
                continue
            T = tuple(sorted(S + (j,)))
            s = wedge_sign(j, S)
            for r, x in fm.endos[j][i].items():
                key, n = where[(T, r)]
                cur = out.setdefault(key, {})
                nv = F.norm(cur.get(n, 0) + s * x)
                if nv:
                    cur[n] = nv
                else:
                    cur.pop(n, None)
        return out

    rank_out: dict[tuple, int] = {}
    for key, gens in blocks.items():
        k, t, q = key
        tgt = (k + 1, t + 1, q)
        vecs = []
        for S, i in gens:
            im = image(S, i)
            extra = set(im) - {tgt}
            if any(im[e] for e in extra):
                raise InvariantError(f"Koszul differential leaves its bidegree at {key}")
            vecs.append(im.get(tgt, {}))
        rank_out[key] = span_dim(F, vecs)
    out = {}
    for key, gens in blocks.items():
        k, t, q = key
        d = len(gens) - rank_out[key] - rank_out.get((k - 1, t - 1, q), 0)
        if d:
            out[key] = d
    return out


# ------------------------------------------------------------ spectral sequence


@dataclass
class SpectralPage:
    """One page ``E_r`` over a field.

    ``dims`` is keyed by (k, t, q'); ``ranks`` holds the rank of
    ``d_r : E_r^{k,t,q'} -> E_r^{k+r,t+1,q'}`` by source entry.
    """

    r: int
    field: Coefficients
    dims: dict[tuple[int, int, int], int]
    ranks: dict[tuple[int, int, int], int]

    @property
    def entries(self) -> dict[tuple[int, int], int]:
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (k, t, _), v in self.dims.items():
            out[(k, t)] += v
        return {key: v for key, v in sorted(out.items()) if v}

    @property
    def total(self) -> int:
        return sum(self.dims.values())

    def euler(self) -> dict[int, int]:
        """Euler characteristic per quantum degree, summing over (k, t)."""
        out: dict[int, int] = defaultdict(int)
        for (_, t, q), v in self.dims.items():
            out[q] += (-1) ** (t % 2) * v
        return {q: v for q, v in sorted(out.items()) if v}

    def is_degenerate(self) -> bool:
        return not any(self.ranks.values())

    def to_json(self) -> dict:
        return {
            "r": self.r,
            "entries": [{"k": k, "t": t, "dim": v} for (k, t), v in self.entries.items()],
            "total": self.total,
            "differential_rank": sum(self.ranks.values()),
        }


class _Block:
    """The filtered complex in one quantum degree over a field."""

    def __init__(self, C: FreeChainComplex, q: int, F: Field):
        self.F = F
        self.idx = {t: C.indices(t, q) for t in C.degrees}
        self.idx = {t: v for t, v in self.idx.items() if v}
        self.filt = {t: [C.filtration[t][i] for i in v] for t, v in self.idx.items()}
        self.mat = {}
        for t in self.idx:
            if t + 1 in self.idx:
                self.mat[t] = C.d(t).submatrix(self.idx[t + 1], self.idx[t])
        self.cols = {t: column_vectors(M) for t, M in self.mat.items()}
        self._Z: dict = {}

    def dim(self, t: int) -> int:
        return len(self.idx.get(t, ()))

    def Z(self, r: int, p: int, t: int) -> list[dict]:
        """Basis of ``{x in F^p C^t : dx in F^{p+r}}``; r < 0 is read as r = 0."""
        key = (max(r, 0), p, t)
        if key in self._Z:
            return self._Z[key]
        r = key[0]
        n = self.dim(t)
        cols = [i for i in range(n) if self.filt[t][i] >= p]
        if t in self.mat:
            rows = [j for j, k in enumerate(self.filt[t + 1]) if k < p + r]
            basis = nullspace(self.mat[t], self.F, cols=cols, rows=rows) if cols else []
        else:
            basis = [{i: self.F(1)} for i in cols]
        self._Z[key] = basis
        return basis

    def dZ(self, r: int, p: int, t: int) -> list[dict]:
        """``d`` applied to ``Z_r^p`` of degree t - 1 (vectors in degree t)."""
        if t - 1 not in self.mat:
            return []
        return [field_apply(self.cols[t - 1], x, self.F) for x in self.Z(r, p, t - 1)]

    def page_dim(self, r: int, p: int, t: int) -> int:
        num = len(self.Z(r, p, t))
        if not num:
            return 0
        den = span_dim(self.F, self.Z(r - 1, p + 1, t) + self.dZ(r - 1, p - r + 1, t))
        return num - den

    def d_rank(self, r: int, p: int, t: int) -> int:
        if t not in self.mat:
            return 0
        base = self.Z(r - 1, p + r + 1, t + 1)
        a = span_dim(self.F, self.dZ(r, p, t + 1) + base)
        b = span_dim(self.F, self.dZ(r - 1, p + 1, t + 1) + base)
        return a - b


def _filtration_length(C: FreeChainComplex) -> int:
    return max((max(v) for v in C.filtration.values() if v), default=0)


def filtration_ss(pc: PointedComplex, c: Coefficients = QQ) -> list[SpectralPage]:
    """Pages ``E_1 .. E_{l+1}``; the last one is ``E_∞``."""
    if not c.is_field:
        raise ValueError(f"spectral sequence needs field coefficients, got {c}; use Q or F<p>")
    F = Field.of(c)
    C = pc.complex
    l = pc.l
    qs = sorted({q for qs in C.qdeg.values() for q in qs})
    blocks = {q: _Block(C, q, F) for q in qs}
    pages = []
    for r in range(1, l + 2):
        dims, ranks = {}, {}
        for q, B in blocks.items():
            for t in B.idx:
                for p in range(0, l + 1):
                    dv = B.page_dim(r, p, t)
                    if dv:
                        dims[(p, t, q)] = dv
                        rk = B.d_rank(r, p, t) if p + r <= l else 0
                        if rk:
                            ranks[(p, t, q)] = rk
        pages.append(SpectralPage(r, c, dims, ranks))
    return pages


# ------------------------------------------------------------ verification


@dataclass
class ConvergenceReport:
    ok: bool
    checks: dict[str, bool]
    mismatches: list[dict]

    def to_json(self) -> dict:
        return {"ok": self.ok, "checks": self.checks, "mismatches": self.mismatches}


def _diff(name: str, want: dict, got: dict) -> list[dict]:
    out = []
    for key in sorted(set(want) | set(got)):
        a, b = want.get(key, 0), got.get(key, 0)
        if a != b:
            out.append({"check": name, "at": list(key), "expected": a, "found": b})
    return out


def verify_convergence(pages: Sequence[SpectralPage], pc: PointedComplex, c: Coefficients | None = None) -> ConvergenceReport:
    """Compare the pages with independently computed quantities.

    E_1 against ``Λ^k ⊗ Kh``, E_2 against Koszul homology of the induced
    field module, E_∞ against the homology of the total complex, and each
    page against the previous one through the ranks of d_r.
    """
    c = c or pages[0].field
    l = pc.l
    mism: list[dict] = []
    checks: dict[str, bool] = {}

    base_h = complex_homology(pc.base, c, lifts=True)
    want1 = {}
    for (h, q), v in base_h.dims.items():
        if v:
            for k in range(l + 1):
                want1[(k, h + k, q + 2 * k)] = comb(l, k) * v
    m = _diff("E1", want1, pages[0].dims)
    checks["E1"] = not m
    mism += m

    if len(pages) > 1:
        fm = field_module(base_h, pc.base, pc.operators, factor=pc.factor)
        m = _diff("E2", field_koszul_dims(fm, l), pages[1].dims)
        checks["E2"] = not m
        mism += m

    tot = complex_homology(pc.complex, c, lifts=False)
    want_inf: dict = defaultdict(int)
    got_inf: dict = defaultdict(int)
    for (t, q), v in tot.dims.items():
        if v:
            want_inf[(t, q)] += v
    for (k, t, q), v in pages[-1].dims.items():
        got_inf[(t, q)] += v
    m = _diff("E_inf", dict(want_inf), dict(got_inf))
    checks["E_inf"] = not m
    mism += m

    ok_pages = True
    for a, b in zip(pages, pages[1:]):
        pred = {}
        for key, v in a.dims.items():
            k, t, q = key
            src = (k - a.r, t - 1, q)
            pred[key] = v - a.ranks.get(key, 0) - a.ranks.get(src, 0)
        m = _diff(f"E{b.r}_from_E{a.r}", {k: v for k, v in pred.items() if v}, b.dims)
        ok_pages &= not m
        mism += m
        if any(b.dims.get(k, 0) > v for k, v in a.dims.items()) or set(b.dims) - set(a.dims):
            ok_pages = False
            mism.append({"check": "monotone", "at": [b.r], "expected": "non-increasing", "found": "increase"})
        if a.euler() != b.euler():
            ok_pages = False
            mism.append({"check": "euler", "at": [b.r], "expected": a.euler(), "found": b.euler()})
    checks["pages"] = ok_pages
    checks["last_degenerate"] = pages[-1].is_degenerate()
    if not checks["last_degenerate"]:
        mism.append({"check": "last_degenerate", "at": [pages[-1].r], "expected": 0,
                     "found": sum(pages[-1].ranks.values())})
    return ConvergenceReport(not mism, checks, mism)
