"""Coefficient rings and exact linear algebra over Q and F_p.

Vectors are sparse dicts ``{index: value}``.  Over Q values are
:class:`fractions.Fraction`, over F_p plain ints in ``range(p)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .groups import PresentedGroup, format_group
from .matrix import IntMatrix


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class Coefficients:
    """One of Z, Q, F_p, Z[1/2]."""

    kind: str
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "F", "Zhalf"):
            raise ValueError(f"unknown coefficient kind {self.kind!r}")
        if self.kind == "F" and not _is_prime(self.p):
            raise ValueError(f"F_p needs p prime, got {self.p}")

    @property
    def is_field(self) -> bool:
        return self.kind in ("Q", "F")

    @property
    def characteristic(self) -> int:
        return self.p if self.kind == "F" else 0

    @property
    def name(self) -> str:
        return {"Z": "Z", "Q": "Q", "Zhalf": "Zhalf"}.get(self.kind, f"F{self.p}")

    def __str__(self) -> str:
        return {"Z": "Z", "Q": "Q", "Zhalf": "Z[1/2]"}.get(self.kind, f"F_{self.p}")

    @classmethod
    def parse(cls, text: str) -> "Coefficients":
        t = text.strip()
        if t in ("Z", "ZZ"):
            return ZZ
        if t in ("Q", "QQ"):
            return QQ
        if t in ("Zhalf", "Z[1/2]", "Z1/2"):
            return ZHALF
        if t[:1] in ("F", "f") and t[1:].lstrip("_").isdigit():
            return GF(int(t[1:].lstrip("_")))
        raise ValueError(f"cannot parse coefficients {text!r}; use Z, Q, Zhalf or F<p>")


ZZ = Coefficients("Z")
QQ = Coefficients("Q")
ZHALF = Coefficients("Zhalf")


def GF(p: int) -> Coefficients:
    return Coefficients("F", p)


@dataclass(frozen=True)
class CoefficientReport:
    """Structure of ``G ⊗ R``: free rank over R plus surviving torsion orders."""

    coefficients: Coefficients
    rank: int
    torsion: tuple[int, ...] = ()

    def __str__(self) -> str:
        ring = {"Z": "Z", "Zhalf": "Z[1/2]", "Q": "Q"}.get(self.coefficients.kind, f"F_{self.coefficients.p}")
        return format_group(self.rank, self.torsion, ring)


def _strip_twos(d: int) -> int:
    while d % 2 == 0:
        d //= 2
    return d


def change_coefficients(G: PresentedGroup, c: Coefficients) -> CoefficientReport:
    free, torsion = G.invariants
    if c.kind == "Z":
        return CoefficientReport(c, free, torsion)
    if c.kind == "Q":
        return CoefficientReport(c, free)
    if c.kind == "F":
        return CoefficientReport(c, free + sum(1 for t in torsion if t % c.p == 0))
    odd = tuple(sorted(o for o in (_strip_twos(t) for t in torsion) if o > 1))
    return CoefficientReport(c, free, odd)


# --------------------------------------------------------------------------
# field arithmetic


class Field:
    """Q when ``p == 0``, otherwise F_p."""

    def __init__(self, p: int = 0):
        self.p = p

    @classmethod
    def of(cls, c: Coefficients) -> "Field":
        if not c.is_field:
            raise ValueError(f"{c} is not a field")
        return cls(c.p if c.kind == "F" else 0)

    def __call__(self, x) -> int | Fraction:
        return Fraction(x) if not self.p else int(x) % self.p

    def inv(self, x):
        return 1 / Fraction(x) if not self.p else pow(x, -1, self.p)

    def norm(self, x):
        return x % self.p if self.p else x

    def __repr__(self) -> str:
        return "Field(Q)" if not self.p else f"Field(F_{self.p})"


def _axpy(field: Field, dst: dict, src: dict, k) -> None:
    p = field.p
    for c, v in src.items():
        nv = dst.get(c, 0) + k * v
        if p:
            nv %= p
        if nv:
            dst[c] = nv
        else:
            dst.pop(c, None)


class Span:
    """Incrementally built subspace in echelon form.

    With ``track=True`` every stored row remembers which inserted vectors
    it is a combination of, so :meth:`express` can write a member of the
    span in terms of the inserted vectors.
    """

    def __init__(self, field: Field, track: bool = False):
        self.field = field
        self.track = track
        self.rows: dict[int, dict] = {}  # pivot -> row with pivot entry 1
        self.combos: dict[int, dict] = {}
        self._n = 0

    @property
    def dim(self) -> int:
        return len(self.rows)

    def _reduce(self, v: dict) -> tuple[dict, dict]:
        F = self.field
        v = {c: F(x) for c, x in v.items() if F(x)}
        combo: dict = {}
        while v:
            hit = None
            for c in sorted(v):
                if c in self.rows:
                    hit = c
                    break
            if hit is None:
                break
            k = v[hit]
            _axpy(F, v, self.rows[hit], -k)
            if self.track:
                _axpy(F, combo, self.combos[hit], k)
        return v, combo

    def add(self, v: dict, label=None) -> bool:
        """Insert ``v``; return True if it enlarged the span."""
        F = self.field
        idx = self._n if label is None else label
        self._n += 1
        r, combo = self._reduce(v)
        if not r:
            return False
        piv = min(r)
        inv = F.inv(r[piv])
        row = {c: F.norm(x * inv) for c, x in r.items()}
        if self.track:
            # r = v - sum(combo) ; row = inv * r
            combo = {k: F.norm(-x * inv) for k, x in combo.items()}
            combo[idx] = F.norm(combo.get(idx, 0) + inv)
            combo = {k: x for k, x in combo.items() if x}
        # keep rows fully reduced against the new pivot
        for p2, row2 in self.rows.items():
            k = row2.get(piv)
            if k:
                _axpy(F, row2, row, -k)
                if self.track:
                    _axpy(F, self.combos[p2], combo, -k)
        self.rows[piv] = row
        if self.track:
            self.combos[piv] = combo
        return True

    def contains(self, v: dict) -> bool:
        r, _ = self._reduce(v)
        return not r

    def express(self, v: dict) -> dict:
        """Coefficients (by insertion label) writing ``v`` from inserted vectors."""
        r, combo = self._reduce(v)
        if r:
            raise ValueError("vector not in span")
        return combo

    def basis(self) -> list[dict]:
        return [dict(self.rows[p]) for p in sorted(self.rows)]


def span_dim(field: Field, vectors: Iterable[dict]) -> int:
    s = Span(field)
    for v in vectors:
        s.add(v)
    return s.dim


def matrix_rank(M: IntMatrix, c: Coefficients | Field) -> int:
    F = c if isinstance(c, Field) else Field.of(c)
    s = Span(F)
    for r in range(M.rows):
        row = M.row(r)
        if row:
            s.add(row)
    return s.dim


def column_vectors(M: IntMatrix) -> list[dict]:
    cols: list[dict] = [{} for _ in range(M.cols)]
    for (r, c), v in M.items():
        cols[c][r] = v
    return cols


def apply(M: IntMatrix | list[dict], v: dict, field: Field) -> dict:
    """Matrix (IntMatrix or list of column dicts) applied to a sparse vector."""
    cols = column_vectors(M) if isinstance(M, IntMatrix) else M
    out: dict = {}
    for c, x in v.items():
        if x:
            _axpy(field, out, cols[c], x)
    return out


def nullspace(M: IntMatrix, field: Field, cols: Sequence[int] | None = None,
              rows: Sequence[int] | None = None) -> list[dict]:
    """Basis of ``{x supported on cols : (M x)[rows] == 0}``.

    Vectors are indexed by the original column numbers of M.
    """
    cols = list(range(M.cols)) if cols is None else list(cols)
    rows = list(range(M.rows)) if rows is None else list(rows)
    colset = set(cols)
    # Gauss-Jordan on the restricted rows, columns taken in `cols` order
    order = {c: i for i, c in enumerate(cols)}
    s = Span(field)
    for r in rows:
        row = {order[c]: v for c, v in M.row(r).items() if c in colset}
        if row:
            s.add(row)
    pivots = set(s.rows)
    basis = []
    for j in range(len(cols)):
        if j in pivots:
            continue
        vec = {cols[j]: field(1)}
        for piv, row in s.rows.items():
            x = row.get(j)
            if x:
                vec[cols[piv]] = field.norm(-x)
        basis.append(vec)
    return basis


@dataclass
class FieldHomology:
    """``ker(d_out)/im(d_in)`` over a field with cycle representatives."""

    field: Field
    lifts: list[dict]
    _span: Span

    @property
    def dim(self) -> int:
        return len(self.lifts)

    def project(self, z: dict) -> list:
        combo = self._span.express(z)
        return [self.field.norm(combo.get(("h", i), 0)) for i in range(self.dim)]


def field_homology(d_in: IntMatrix, d_out: IntMatrix, c: Coefficients | Field) -> FieldHomology:
    F = c if isinstance(c, Field) else Field.of(c)
    span = Span(F, track=True)
    for j, col in enumerate(column_vectors(d_in)):
        span.add(col, label=("b", j))
    lifts = []
    for z in nullspace(d_out, F):
        if span.add(z, label=("h", len(lifts))):
            lifts.append(z)
    return FieldHomology(F, lifts, span)
