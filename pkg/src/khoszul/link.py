"""Combinatorial link diagrams: PD codes, braid closures, resolutions.

PD convention follows the Knot Atlas: ``X[i,j,k,l]`` lists the four arcs
at a crossing counterclockwise, starting from the incoming under-strand.
The 0-smoothing joins (i,j) and (k,l); the 1-smoothing joins (i,l) and
(j,k).  Components without crossings are carried as ``free_loops`` and get
arc labels ``2n+1, 2n+2, ...`` after the crossing arcs.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, NamedTuple, Sequence


class DiagramError(ValueError):
    """Invalid diagram input; message carries the offending position or label."""


class Marking(NamedTuple):
    arc: int
    offset: int = 0

    def __str__(self) -> str:
        return f"{self.arc}:{self.offset}"


def _union_find(labels):
    parent = {x: x for x in labels}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            parent[rb] = ra

    return find, union


@dataclass(frozen=True)
class LinkDiagram:
    """A validated oriented link diagram with optional marking points.

    Crossing order is the input order and fixes every sign downstream.
    """

    crossings: tuple[tuple[int, int, int, int], ...] = ()
    free_loops: int = 0
    markings: tuple[Marking, ...] = ()
    basepoint: Marking | None = None
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "crossings", tuple(tuple(int(a) for a in x) for x in self.crossings))
        object.__setattr__(self, "markings", tuple(Marking(*m) for m in self.markings))
        if self.basepoint is not None:
            object.__setattr__(self, "basepoint", Marking(*self.basepoint))
        if self.free_loops < 0:
            raise DiagramError(f"free_loops must be >= 0, got {self.free_loops}")
        self._validate()
        # orientation is computed eagerly so inconsistent codes fail here
        self._orientation  # noqa: B018

    # ---------------------------------------------------------------- checks
    def _validate(self) -> None:
        n = len(self.crossings)
        counts: dict[int, int] = {}
        for ci, x in enumerate(self.crossings):
            if len(x) != 4:
                raise DiagramError(f"crossing {ci} has {len(x)} labels, expected 4")
            for a in x:
                counts[a] = counts.get(a, 0) + 1
        for a in sorted(counts):
            if counts[a] != 2:
                raise DiagramError(f"arc {a} appears {counts[a]} time(s), expected exactly 2")
        for ci, x in enumerate(self.crossings):
            for a in x:
                if not 1 <= a <= 2 * n:
                    raise DiagramError(f"crossing {ci}: arc label {a} out of range 1..{2 * n}")
        seen = set()
        all_marks = list(self.markings) + ([self.basepoint] if self.basepoint is not None else [])
        for m in all_marks:
            if not 1 <= m.arc <= self.n_arcs:
                raise DiagramError(f"marking {m} references missing arc {m.arc}")
            if m.offset < 0:
                raise DiagramError(f"marking {m} has negative offset")
            if m in seen:
                raise DiagramError(f"marking {m} is given twice")
            seen.add(m)

    # ------------------------------------------------------------ structure
    @property
    def n(self) -> int:
        return len(self.crossings)

    @property
    def n_arcs(self) -> int:
        return 2 * self.n + self.free_loops

    @property
    def arcs(self) -> range:
        return range(1, self.n_arcs + 1)

    @cached_property
    def _slots(self) -> dict[int, list[tuple[int, int]]]:
        slots: dict[int, list[tuple[int, int]]] = {a: [] for a in range(1, 2 * self.n + 1)}
        for ci, x in enumerate(self.crossings):
            for pos, a in enumerate(x):
                slots[a].append((ci, pos))
        return slots

    @cached_property
    def _orientation(self) -> tuple[tuple[tuple[int, ...], ...], dict[int, tuple[int, int]]]:
        """(components as arc cycles, head slot of each arc)."""
        slots = self._slots
        X = self.crossings
        unvisited = set(range(1, 2 * self.n + 1))
        components = []
        head: dict[int, tuple[int, int]] = {}
        while unvisited:
            start = min(unvisited)

            def walk(first_exit):
                order, heads = [], {}
                a, exit_slot = start, first_exit
                while True:
                    order.append(a)
                    heads[a] = exit_slot
                    ci, pos = exit_slot
                    nslot = (ci, (pos + 2) % 4)
                    b = X[ci][nslot[1]]
                    s0, s1 = slots[b]
                    # b is entered at nslot and leaves by its other slot
                    nxt_exit = s1 if s0 == nslot else s0
                    if b == start and nxt_exit == first_exit:
                        return order, heads
                    if b in heads and b != start:
                        raise DiagramError(f"arc {b} revisited while tracing component of arc {start}")
                    a, exit_slot = b, nxt_exit

            s0, s1 = slots[start]
            order, heads = walk(s0)
            under = [(a, s) for a, s in heads.items() if s[1] in (0, 2)]
            if under:
                good = [s[1] == 0 for _, s in under]
                if all(good):
                    pass
                elif not any(good):
                    order, heads = walk(s1)
                else:
                    bad = next(a for (a, s), g in zip(under, good) if g != good[0])
                    raise DiagramError(f"inconsistent orientation along the component of arc {start} (arc {bad})")
            elif len(order) > 1:
                # pure over-strand component: orient by increasing labels
                if order[1] > order[-1]:
                    order, heads = walk(s1)
            components.append(tuple(order))
            head.update(heads)
            unvisited -= set(order)
        for k in range(self.free_loops):
            components.append((2 * self.n + 1 + k,))
        return tuple(components), head

    @property
    def components(self) -> tuple[tuple[int, ...], ...]:
        return self._orientation[0]

    @property
    def m(self) -> int:
        return len(self.components)

    @cached_property
    def component_of_arc(self) -> dict[int, int]:
        return {a: i for i, comp in enumerate(self.components) for a in comp}

    def component_of(self, mark: Marking) -> int:
        return self.component_of_arc[mark.arc]

    @cached_property
    def signs(self) -> tuple[int, ...]:
        """+1 / -1 per crossing (right-handed crossings are positive)."""
        head = self._orientation[1]
        out = []
        for ci, x in enumerate(self.crossings):
            # over strand enters at position 3 (l -> j) for a positive crossing
            l_arc = x[3]
            out.append(1 if head[l_arc] == (ci, 3) else -1)
        return tuple(out)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return sum(1 for s in self.signs if s < 0)

    @property
    def writhe(self) -> int:
        return self.n_plus - self.n_minus

    # -------------------------------------------------------------- helpers
    def with_markings(self, markings: Sequence[Marking | tuple[int, int]] = (),
                      basepoint: Marking | tuple[int, int] | None = None) -> "LinkDiagram":
        return LinkDiagram(self.crossings, self.free_loops, tuple(Marking(*m) for m in markings),
                           None if basepoint is None else Marking(*basepoint), name=self.name)

    def one_marking_per_component(self, skip_last: bool = False) -> tuple[Marking, ...]:
        comps = self.components[:-1] if skip_last else self.components
        return tuple(Marking(min(c), 0) for c in comps)

    def __str__(self) -> str:
        return self.name or render_pd(self)


# ------------------------------------------------------------------ parsing
_X_RE = re.compile(r"X\s*\[\s*([^\]]*)\]")
_LOOPS_RE = re.compile(r"\+\s*(\d+)\s*free loops?(?:\(s\))?\s*$")


def parse_pd(text: str, free_loops: int = 0, markings: Sequence = (), basepoint=None,
             name: str = "") -> LinkDiagram:
    """Parse ``X[a,b,c,d] X[...]`` (optionally wrapped in ``PD[...]``).

    A trailing ``+ k free loop(s)``, as written by :func:`render_pd`, adds
    k crossingless components.
    """
    body = text.strip()
    loops = _LOOPS_RE.search(body)
    if loops:
        free_loops += int(loops.group(1))
        body = body[:loops.start()].strip()
    if body.startswith("PD"):
        inner = body[2:].strip()
        if not (inner.startswith("[") and inner.endswith("]")):
            raise DiagramError("PD[...] wrapper is not closed")
        body = inner[1:-1]
    crossings = []
    pos = 0
    for mt in _X_RE.finditer(body):
        gap = body[pos:mt.start()].strip(" ,\t\n")
        if gap:
            raise DiagramError(f"unexpected text {gap!r} at position {pos}")
        parts = [p.strip() for p in mt.group(1).split(",")]
        if len(parts) != 4:
            raise DiagramError(f"crossing at position {mt.start()} has {len(parts)} labels, expected 4")
        try:
            crossings.append(tuple(int(p) for p in parts))
        except ValueError:
            raise DiagramError(f"non-integer arc label in {mt.group(0)!r} at position {mt.start()}") from None
        pos = mt.end()
    tail = body[pos:].strip(" ,\t\n")
    if tail:
        raise DiagramError(f"unexpected text {tail!r} at position {pos}")
    if not crossings and not free_loops:
        raise DiagramError("empty PD code; declare free_loops for crossingless unknots")
    return LinkDiagram(tuple(crossings), free_loops, tuple(Marking(*m) for m in markings),
                       None if basepoint is None else Marking(*basepoint), name=name)


def render_pd(d: LinkDiagram) -> str:
    s = " ".join("X[" + ",".join(str(a) for a in x) + "]" for x in d.crossings)
    if d.free_loops:
        s = (s + " " if s else "") + f"+ {d.free_loops} free loop(s)"
    return s


def diagram_to_json(d: LinkDiagram) -> dict[str, Any]:
    return {
        "pd": [list(x) for x in d.crossings],
        "free_loops": d.free_loops,
        "markings": [{"arc": m.arc, "offset": m.offset} for m in d.markings],
        "basepoint": None if d.basepoint is None else {"arc": d.basepoint.arc, "offset": d.basepoint.offset},
    }


def diagram_from_json(obj: dict[str, Any] | str, name: str = "") -> LinkDiagram:
    if isinstance(obj, str):
        try:
            obj = json.loads(obj)
        except json.JSONDecodeError as e:
            raise DiagramError(f"invalid JSON at position {e.pos}: {e.msg}") from None
    if not isinstance(obj, dict) or "pd" not in obj:
        raise DiagramError("JSON diagram needs a 'pd' field")
    try:
        crossings = tuple(tuple(int(a) for a in x) for x in obj["pd"])
        marks = tuple(Marking(int(m["arc"]), int(m.get("offset", 0))) for m in obj.get("markings") or ())
        bp = obj.get("basepoint")
        basepoint = None if bp is None else Marking(int(bp["arc"]), int(bp.get("offset", 0)))
        loops = int(obj.get("free_loops", 0))
    except (TypeError, KeyError, ValueError) as e:
        raise DiagramError(f"malformed JSON diagram: {e}") from None
    return LinkDiagram(crossings, loops, marks, basepoint, name=name)


_GEN_RE = re.compile(r"^(?:([sS])(\d+)(\^-1|\^\{-1\}|')?|(-?\d+))$")


def parse_braid_word(word: str) -> list[int]:
    """``"s1 s2^-1 S3 -1"`` -> [1, -2, -3, -1] (capital S means inverse)."""
    out = []
    for tok in re.split(r"[\s,*.]+", word.strip()):
        if not tok:
            continue
        mt = _GEN_RE.match(tok)
        if not mt:
            raise DiagramError(f"bad braid generator {tok!r}")
        if mt.group(4) is not None:
            g = int(mt.group(4))
            if g == 0:
                raise DiagramError("braid generator 0 does not exist")
        else:
            g = int(mt.group(2))
            if mt.group(1) == "S" or mt.group(3):
                g = -g
        out.append(g)
    return out


def parse_braid(word: str | Sequence[int], strands: int, name: str = "") -> LinkDiagram:
    """Diagram of the braid closure; arcs are numbered along each component."""
    if strands < 1:
        raise DiagramError(f"strand count must be >= 1, got {strands}")
    gens = parse_braid_word(word) if isinstance(word, str) else [int(g) for g in word]
    for g in gens:
        if not 1 <= abs(g) <= strands - 1:
            raise DiagramError(f"generator {g} out of range for {strands} strands")
    counter = iter(range(10 ** 9))
    cur = [next(counter) for _ in range(strands)]
    start = list(cur)
    raw = []
    for g in gens:
        i = abs(g) - 1
        a, b = cur[i], cur[i + 1]  # incoming at positions i (left), i+1 (right)
        out_r, out_l = next(counter), next(counter)  # a continues to i+1, b to i
        if g > 0:
            # left strand passes over: under b (SE -> NW), over a (SW -> NE)
            raw.append((b, out_r, out_l, a))
        else:
            # right strand passes over: under a (SW -> NE), over b (SE -> NW)
            raw.append((a, b, out_r, out_l))
        cur[i], cur[i + 1] = out_l, out_r
    labels = set(start) | {x for c in raw for x in c}
    find, union = _union_find(labels)
    for s, e in zip(start, cur):
        union(s, e)
    used = {find(a) for c in raw for a in c}
    free = sum(1 for s in start if find(s) not in used)
    crossings = [tuple(find(a) for a in c) for c in raw]
    return _relabel(crossings, free, name)


def _relabel(crossings: list[tuple], free: int, name: str = "") -> LinkDiagram:
    """Renumber arbitrary hashable arc ids to 1..2n along component traversals."""
    if not crossings:
        return LinkDiagram((), free, name=name)
    ids = sorted({a for c in crossings for a in c})
    tmp = {a: i + 1 for i, a in enumerate(ids)}
    prov = LinkDiagram(tuple(tuple(tmp[a] for a in c) for c in crossings), 0)
    new = {}
    for comp in prov.components:
        for a in comp:
            new[a] = len(new) + 1
    return LinkDiagram(tuple(tuple(new[a] for a in c) for c in prov.crossings), free, name=name)


def mirror(d: LinkDiagram) -> LinkDiagram:
    """Switch every crossing; markings and crossing order are kept."""
    out = []
    for ci, (i, j, k, l) in enumerate(d.crossings):
        if d.signs[ci] > 0:  # over went l -> j, l is the new incoming under arc
            out.append((l, i, j, k))
        else:
            out.append((j, k, l, i))
    return LinkDiagram(tuple(out), d.free_loops, d.markings, d.basepoint,
                       name=(d.name + "*") if d.name else "")


# -------------------------------------------------------------- resolutions
@dataclass(frozen=True)
class ResolvedState:
    vertex: tuple[int, ...]
    circles: tuple[tuple[int, ...], ...]
    circle_of_arc: dict[int, int] = field(repr=False)
    circle_of_marking: tuple[int, ...] = ()
    circle_of_basepoint: int | None = None

    @property
    def n_circles(self) -> int:
        return len(self.circles)


def smoothing_pairs(x: tuple[int, int, int, int], bit: int) -> tuple[tuple[int, int], tuple[int, int]]:
    i, j, k, l = x
    return ((i, j), (k, l)) if bit == 0 else ((i, l), (j, k))


def resolve(d: LinkDiagram, v: Sequence[int]) -> ResolvedState:
    """Circles of the resolution ``v`` (one 0/1 entry per crossing)."""
    v = tuple(int(b) for b in v)
    if len(v) != d.n:
        raise DiagramError(f"vertex has length {len(v)}, diagram has {d.n} crossings")
    if any(b not in (0, 1) for b in v):
        raise DiagramError(f"vertex {v} is not a 0/1 vector")
    find, union = _union_find(d.arcs)
    for x, bit in zip(d.crossings, v):
        for a, b in smoothing_pairs(x, bit):
            union(a, b)
    groups: dict[int, list[int]] = {}
    for a in d.arcs:
        groups.setdefault(find(a), []).append(a)
    circles = tuple(sorted((tuple(_cyclic_order(d, v, g)) for g in groups.values()), key=min))
    circle_of_arc = {a: i for i, c in enumerate(circles) for a in c}
    return ResolvedState(
        vertex=v,
        circles=circles,
        circle_of_arc=circle_of_arc,
        circle_of_marking=tuple(circle_of_arc[m.arc] for m in d.markings),
        circle_of_basepoint=None if d.basepoint is None else circle_of_arc[d.basepoint.arc],
    )


def _cyclic_order(d: LinkDiagram, v: tuple[int, ...], arcs: list[int]) -> list[int]:
    """Arcs of one circle in the order met when walking around it."""
    if len(arcs) == 1:
        return arcs
    slots = d._slots
    partner = {}
    for ci, bit in enumerate(v):
        for p, q in (((0, 1), (2, 3)) if bit == 0 else ((0, 3), (1, 2))):
            partner[(ci, p)] = (ci, q)
            partner[(ci, q)] = (ci, p)
    start = min(arcs)
    order = [start]
    s_out = slots[start][1]
    while True:
        nslot = partner[s_out]
        b = d.crossings[nslot[0]][nslot[1]]
        if b == start:
            return order
        order.append(b)
        s0, s1 = slots[b]
        s_out = s1 if s0 == nslot else s0
