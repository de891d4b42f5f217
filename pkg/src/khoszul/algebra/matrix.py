"""Sparse integer matrices and Smith normal form.

Entries are arbitrary-precision Python ints.  Matrices are immutable once
built; all elimination happens on private row-dict copies.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Iterator, Mapping, Sequence


class IntMatrix:
    """Immutable sparse integer matrix stored as a dict of row dicts."""

    __slots__ = ("rows", "cols", "_rows", "_hash")

    def __init__(self, rows: int, cols: int, entries: Mapping[tuple[int, int], int] | None = None):
        if rows < 0 or cols < 0:
            raise ValueError(f"negative shape ({rows}, {cols})")
        self.rows = rows
        self.cols = cols
        self._hash = None
        data: dict[int, dict[int, int]] = {}
        for (r, c), v in (entries or {}).items():
            if not (0 <= r < rows and 0 <= c < cols):
                raise IndexError(f"entry ({r}, {c}) outside shape ({rows}, {cols})")
            v = int(v)
            if v:
                data.setdefault(r, {})[c] = v
        self._rows = data

    @classmethod
    def _from_rows(cls, rows: int, cols: int, data: dict[int, dict[int, int]]) -> "IntMatrix":
        # trusted constructor: data already clean and in range
        m = cls.__new__(cls)
        m.rows = rows
        m.cols = cols
        m._hash = None
        m._rows = {r: d for r, d in data.items() if d}
        return m

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls._from_rows(n, n, {i: {i: 1} for i in range(n)})

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else (cols or 0)
        entries = {}
        for i, row in enumerate(rows):
            if len(row) != ncols:
                raise ValueError("ragged dense matrix")
            for j, v in enumerate(row):
                if v:
                    entries[i, j] = v
        return cls(nrows, ncols, entries)

    @classmethod
    def from_columns(cls, nrows: int, columns: Sequence[Sequence[int] | Mapping[int, int]]) -> "IntMatrix":
        data: dict[int, dict[int, int]] = defaultdict(dict)
        for j, col in enumerate(columns):
            items = col.items() if isinstance(col, Mapping) else enumerate(col)
            for i, v in items:
                if v:
                    if not 0 <= i < nrows:
                        raise IndexError(f"row {i} outside {nrows}")
                    data[i][j] = int(v)
        return cls._from_rows(nrows, len(columns), dict(data))

    @classmethod
    def diagonal(cls, values: Sequence[int], rows: int | None = None, cols: int | None = None) -> "IntMatrix":
        k = len(values)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        return cls(rows, cols, {(i, i): v for i, v in enumerate(values)})

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> int:
        r, c = key
        return self._rows.get(r, {}).get(c, 0)

    def items(self) -> Iterator[tuple[tuple[int, int], int]]:
        for r in sorted(self._rows):
            row = self._rows[r]
            for c in sorted(row):
                yield (r, c), row[c]

    def row(self, r: int) -> dict[int, int]:
        return dict(self._rows.get(r, {}))

    def column(self, c: int) -> dict[int, int]:
        return {r: row[c] for r, row in self._rows.items() if c in row}

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self._rows.values())

    def is_zero(self) -> bool:
        return not self._rows

    def to_dense(self) -> list[list[int]]:
        out = [[0] * self.cols for _ in range(self.rows)]
        for r, row in self._rows.items():
            for c, v in row.items():
                out[r][c] = v
        return out

    @property
    def T(self) -> "IntMatrix":
        data: dict[int, dict[int, int]] = defaultdict(dict)
        for r, row in self._rows.items():
            for c, v in row.items():
                data[c][r] = v
        return IntMatrix._from_rows(self.cols, self.rows, dict(data))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        out: dict[int, dict[int, int]] = {}
        orows = other._rows
        for r, row in self._rows.items():
            acc: dict[int, int] = defaultdict(int)
            for k, a in row.items():
                brow = orows.get(k)
                if brow:
                    for c, b in brow.items():
                        acc[c] += a * b
            acc = {c: v for c, v in acc.items() if v}
            if acc:
                out[r] = acc
        return IntMatrix._from_rows(self.rows, other.cols, out)

    def apply(self, vec: Sequence[int]) -> list[int]:
        """Matrix times a dense column vector."""
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        out = [0] * self.rows
        for r, row in self._rows.items():
            out[r] = sum(v * vec[c] for c, v in row.items())
        return out

    def _combine(self, other: "IntMatrix", sign: int) -> "IntMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        data = {r: dict(row) for r, row in self._rows.items()}
        for r, row in other._rows.items():
            tgt = data.setdefault(r, {})
            for c, v in row.items():
                nv = tgt.get(c, 0) + sign * v
                if nv:
                    tgt[c] = nv
                else:
                    tgt.pop(c, None)
        return IntMatrix._from_rows(self.rows, self.cols, data)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "IntMatrix":
        return self.scale(-1)

    def scale(self, k: int) -> "IntMatrix":
        if k == 0:
            return IntMatrix(self.rows, self.cols)
        return IntMatrix._from_rows(
            self.rows, self.cols, {r: {c: k * v for c, v in row.items()} for r, row in self._rows.items()}
        )

    def submatrix(self, row_idx: Sequence[int], col_idx: Sequence[int]) -> "IntMatrix":
        rmap = {r: i for i, r in enumerate(row_idx)}
        cmap = {c: j for j, c in enumerate(col_idx)}
        data: dict[int, dict[int, int]] = {}
        for r, row in self._rows.items():
            i = rmap.get(r)
            if i is None:
                continue
            new = {cmap[c]: v for c, v in row.items() if c in cmap}
            if new:
                data[i] = new
        return IntMatrix._from_rows(len(row_idx), len(col_idx), data)

    def first_nonzero(self) -> tuple[int, int, int] | None:
        for (r, c), v in self.items():
            return r, c, v
        return None

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.shape, tuple(self.items())))
        return self._hash

    def __repr__(self) -> str:
        if self.rows * self.cols <= 64:
            return f"IntMatrix({self.to_dense()!r})" if self.rows else f"IntMatrix(0x{self.cols})"
        return f"IntMatrix<{self.rows}x{self.cols}, nnz={self.nnz}>"


def hstack(blocks: Sequence[IntMatrix], rows: int | None = None) -> IntMatrix:
    if not blocks:
        return IntMatrix(rows or 0, 0)
    nrows = blocks[0].rows
    data: dict[int, dict[int, int]] = defaultdict(dict)
    off = 0
    for b in blocks:
        if b.rows != nrows:
            raise ValueError("hstack row mismatch")
        for r, row in b._rows.items():
            for c, v in row.items():
                data[r][c + off] = v
        off += b.cols
    return IntMatrix._from_rows(nrows, off, dict(data))


def vstack(blocks: Sequence[IntMatrix], cols: int | None = None) -> IntMatrix:
    if not blocks:
        return IntMatrix(0, cols or 0)
    ncols = blocks[0].cols
    data: dict[int, dict[int, int]] = {}
    off = 0
    for b in blocks:
        if b.cols != ncols:
            raise ValueError("vstack column mismatch")
        for r, row in b._rows.items():
            data[r + off] = dict(row)
        off += b.rows
    return IntMatrix._from_rows(off, ncols, data)


def block_diag(blocks: Sequence[IntMatrix]) -> IntMatrix:
    data: dict[int, dict[int, int]] = {}
    ro = co = 0
    for b in blocks:
        for r, row in b._rows.items():
            data[r + ro] = {c + co: v for c, v in row.items()}
        ro += b.rows
        co += b.cols
    return IntMatrix._from_rows(ro, co, data)


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ M @ V == D`` with U, V unimodular and D diagonal, d_1 | d_2 | ...

    ``U_inv`` and ``V_inv`` are carried along because homology lifts need
    them and inverting afterwards would be wasteful.
    """

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    U_inv: IntMatrix
    V_inv: IntMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.divisors)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.U.rows, self.V.rows)


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (g, s, t) with s*a + t*b == g == gcd(a, b) >= 0."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if a < 0:
        return -a, -s0, -t0
    return a, s0, t0


def _identity_rows(n: int) -> dict[int, dict[int, int]]:
    return {i: {i: 1} for i in range(n)}


def _axpy(rows: dict[int, dict[int, int]], dst: int, src: int, k: int) -> None:
    """rows[dst] += k * rows[src]."""
    srow = rows.get(src)
    if not srow or not k:
        return
    drow = rows.setdefault(dst, {})
    for c, v in srow.items():
        nv = drow.get(c, 0) + k * v
        if nv:
            drow[c] = nv
        else:
            drow.pop(c, None)


def _mix(rows: dict[int, dict[int, int]], i: int, j: int, a: int, b: int, c: int, d: int) -> None:
    """(row_i, row_j) <- (a*row_i + b*row_j, c*row_i + d*row_j)."""
    ri = rows.get(i, {})
    rj = rows.get(j, {})
    ni: dict[int, int] = {}
    nj: dict[int, int] = {}
    for key in set(ri) | set(rj):
        x, y = ri.get(key, 0), rj.get(key, 0)
        u, w = a * x + b * y, c * x + d * y
        if u:
            ni[key] = u
        if w:
            nj[key] = w
    rows[i] = ni
    rows[j] = nj


class _Eliminator:
    """Mutable working state of one SNF run."""

    def __init__(self, M: IntMatrix, track: bool):
        self.m, self.n = M.shape
        self.track = track
        self.A = {r: dict(row) for r, row in M._rows.items()}
        self.colidx: dict[int, set[int]] = defaultdict(set)
        for r, row in self.A.items():
            for c in row:
                self.colidx[c].add(r)
        if track:
            self.U = _identity_rows(self.m)
            self.UinvT = _identity_rows(self.m)  # rows are columns of U^-1
            self.VT = _identity_rows(self.n)  # rows are columns of V
            self.Vinv = _identity_rows(self.n)

    # A[dst,:] += k * A[src,:]
    def row_op(self, dst: int, src: int, k: int) -> None:
        srow = self.A.get(src, {})
        drow = self.A.setdefault(dst, {})
        for c, v in srow.items():
            nv = drow.get(c, 0) + k * v
            if nv:
                if c not in drow:
                    self.colidx[c].add(dst)
                drow[c] = nv
            else:
                drow.pop(c, None)
                self.colidx[c].discard(dst)
        if self.track:
            _axpy(self.U, dst, src, k)
            _axpy(self.UinvT, src, dst, -k)

    # A[:,dst] += k * A[:,src]
    def col_op(self, dst: int, src: int, k: int) -> None:
        for r in list(self.colidx.get(src, ())):
            row = self.A[r]
            nv = row.get(dst, 0) + k * row[src]
            if nv:
                if dst not in row:
                    self.colidx[dst].add(r)
                row[dst] = nv
            else:
                row.pop(dst, None)
                self.colidx[dst].discard(r)
        if self.track:
            _axpy(self.VT, dst, src, k)
            _axpy(self.Vinv, src, dst, -k)

    def negate_row(self, r: int) -> None:
        row = self.A.get(r, {})
        for c in row:
            row[c] = -row[c]
        if self.track:
            self.U[r] = {c: -v for c, v in self.U.get(r, {}).items()}
            self.UinvT[r] = {c: -v for c, v in self.UinvT.get(r, {}).items()}

    def pick_pivot(self, rows_left: set[int]) -> tuple[int, int] | None:
        best = None
        for r in rows_left:
            row = self.A.get(r)
            if not row:
                continue
            rl = len(row)
            for c, v in row.items():
                key = (abs(v), rl * len(self.colidx[c]), r, c)
                if best is None or key < best:
                    best = key
        return None if best is None else (best[2], best[3])

    def run(self) -> list[tuple[int, int, int]]:
        rows_left = {r for r in self.A if self.A[r]}
        pivots: list[tuple[int, int, int]] = []
        while True:
            pv = self.pick_pivot(rows_left)
            if pv is None:
                break
            r, c = pv
            p = self.A[r][c]
            clean = True
            for r2 in sorted(self.colidx[c] - {r}):
                q = self.A[r2][c] // p
                self.row_op(r2, r, -q)
                if c in self.A[r2]:
                    clean = False
            if not clean:
                continue
            for c2 in sorted(set(self.A[r]) - {c}):
                q = self.A[r][c2] // p
                self.col_op(c2, c, -q)
                if c2 in self.A[r]:
                    clean = False
            if not clean:
                continue
            if p < 0:
                self.negate_row(r)
                p = -p
            pivots.append((r, c, p))
            rows_left.discard(r)
        self._divisor_chain(pivots)
        return pivots

    def _divisor_chain(self, pivots: list[tuple[int, int, int]]) -> None:
        k = len(pivots)
        for i in range(k):
            for j in range(i + 1, k):
                ri, ci, a = pivots[i]
                rj, cj, b = pivots[j]
                if b % a == 0:
                    continue
                g, s, t = xgcd(a, b)
                a1, b1 = a // g, b // g
                if self.track:
                    _mix(self.U, ri, rj, s, t, -b1, a1)
                    _mix(self.UinvT, ri, rj, a1, b1, -t, s)
                    _mix(self.VT, ci, cj, 1, 1, -t * b1, s * a1)
                    _mix(self.Vinv, ci, cj, s * a1, t * b1, -1, 1)
                pivots[i] = (ri, ci, g)
                pivots[j] = (rj, cj, a * b // g)


def _permuted_rows(rows: dict[int, dict[int, int]], order: Sequence[int], ncols: int) -> IntMatrix:
    return IntMatrix._from_rows(len(order), ncols, {i: dict(rows.get(o, {})) for i, o in enumerate(order)})


def snf(M: IntMatrix) -> SmithDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting picks the smallest nonzero magnitude (Markowitz count breaks
    ties), which keeps Khovanov-type 0/±1 matrices sparse.
    """
    el = _Eliminator(M, track=True)
    pivots = el.run()
    m, n = M.shape
    prow = [r for r, _, _ in pivots]
    pcol = [c for _, c, _ in pivots]
    row_order = prow + [r for r in range(m) if r not in set(prow)]
    col_order = pcol + [c for c in range(n) if c not in set(pcol)]
    U = _permuted_rows(el.U, row_order, m)
    U_inv = _permuted_rows(el.UinvT, row_order, m).T
    V = _permuted_rows(el.VT, col_order, n).T
    V_inv = _permuted_rows(el.Vinv, col_order, n)
    divisors = tuple(d for _, _, d in pivots)
    D = IntMatrix.diagonal(divisors, m, n)
    return SmithDecomposition(U=U, D=D, V=V, U_inv=U_inv, V_inv=V_inv, divisors=divisors)


def elementary_divisors(M: IntMatrix) -> tuple[int, ...]:
    """Nonzero SNF diagonal without computing transforms."""
    el = _Eliminator(M, track=False)
    return tuple(d for _, _, d in el.run())


def integer_rank(M: IntMatrix) -> int:
    return len(elementary_divisors(M))


def check_snf(M: IntMatrix, S: SmithDecomposition) -> None:
    """Raise AssertionError unless S is a valid Smith decomposition of M."""
    assert S.U @ M @ S.V == S.D, "U M V != D"
    m, n = M.shape
    assert S.U @ S.U_inv == IntMatrix.identity(m), "U U^-1 != I"
    assert S.V @ S.V_inv == IntMatrix.identity(n), "V V^-1 != I"
    ds = S.divisors
    assert all(d > 0 for d in ds)
    assert all(ds[i + 1] % ds[i] == 0 for i in range(len(ds) - 1)), f"divisor chain broken: {ds}"
    for (r, c), v in S.D.items():
        assert r == c


def columns_of(M: IntMatrix, cols: Iterable[int]) -> IntMatrix:
    return M.submatrix(range(M.rows), list(cols))
