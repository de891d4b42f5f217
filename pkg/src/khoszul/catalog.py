"""Bundled link diagrams and known KHI dimensions.

Ids: ``unknot``, ``unlink:m`` (m <= 4), ``hopf``, ``trefoil`` (right
handed), ``trefoil-right``, ``trefoil-left``, ``figure-eight``.  Only the
unknot, unlinks and the Hopf link carry a KHI dimension.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from importlib import resources

from .link import DiagramError, LinkDiagram, mirror, parse_braid


@dataclass(frozen=True)
class KnownInvariantEntry:
    link_id: str
    m: int
    khi_dim: int
    source: str

    def __post_init__(self):
        if self.khi_dim < 1:
            raise ValueError(f"khi_dim must be >= 1, got {self.khi_dim}")


@lru_cache(maxsize=1)
def _raw() -> dict:
    text = resources.files("khoszul").joinpath("data/catalog.json").read_text()
    return json.loads(text)


def _entries() -> dict[str, dict]:
    out = {}
    for e in _raw()["links"]:
        out[e["id"]] = e
        for a in e.get("aliases", ()):
            out[a] = e
    return out


def catalog_ids() -> list[str]:
    ids = [e["id"] for e in _raw()["links"]]
    ids += [f"unlink:{m}" for m in range(1, _raw()["unlink"]["max_m"] + 1)]
    return ids


def _build(raw: dict, name: str) -> LinkDiagram:
    if "mirror_of" in raw:
        return mirror(get_link(raw["mirror_of"])).with_markings()
    if "braid" in raw:
        return parse_braid(raw["braid"], raw["strands"], name=name)
    return LinkDiagram(tuple(tuple(x) for x in raw.get("pd", ())), raw.get("free_loops", 0), name=name)


def _unlink_m(link_id: str) -> int | None:
    if not link_id.startswith("unlink:"):
        return None
    try:
        m = int(link_id.split(":", 1)[1])
    except ValueError:
        raise DiagramError(f"bad unlink id {link_id!r}; use unlink:<m>") from None
    top = _raw()["unlink"]["max_m"]
    if not 1 <= m <= top:
        raise DiagramError(f"unlink:{m} outside the catalog (1..{top})")
    return m


def get_link(link_id: str) -> LinkDiagram:
    """Primary diagram for a catalog id."""
    m = _unlink_m(link_id)
    if m is not None:
        return LinkDiagram((), m, name=link_id)
    e = _entries().get(link_id)
    if e is None:
        raise DiagramError(f"unknown catalog link {link_id!r}; known: {', '.join(catalog_ids())}")
    d = _build(e, link_id)
    return LinkDiagram(d.crossings, d.free_loops, name=link_id)


def alternates(link_id: str) -> list[LinkDiagram]:
    """Other stored diagrams of the same link."""
    if _unlink_m(link_id) is not None:
        return []
    e = _entries()[link_id]
    return [_build(a, f"{link_id}~{i}") for i, a in enumerate(e.get("alternates", ()))]


def known_khi(link_id: str) -> KnownInvariantEntry | None:
    m = _unlink_m(link_id)
    if m is not None:
        return KnownInvariantEntry(link_id, m, 2 ** (m - 1), _raw()["unlink"]["source"])
    e = _entries().get(link_id)
    if e is None or "khi_dim" not in e:
        return None
    return KnownInvariantEntry(e["id"], e["m"], e["khi_dim"], e["source"])
