"""Command line: ``khoszul {kh,pointed,koszul,ss,verify}``.

JSON goes to stdout, aligned text to stderr.  Exit codes: 0 success,
1 a verification failed, 2 bad input, 3 an internal invariant broke.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from typing import Sequence

from . import __version__
from .algebra import (
    ZZ,
    AlgebraError,
    Coefficients,
    InvariantError,
    PresentedGroup,
    change_coefficients,
    complex_homology,
)
from .catalog import get_link, known_khi
from .khovanov import build_cube, reduced_complex
from .koszul import KoszulError, filtration_ss, koszul, koszul_homology, induced_module, verify_convergence
from .link import DiagramError, LinkDiagram, Marking, diagram_from_json, diagram_to_json, parse_braid, parse_pd
from .pointed import build_pointed, build_reduced_pointed, pointed_homology

SCHEMA_VERSION = "1.0"


class UsageError(ValueError):
    pass


@dataclass
class RunConfig:
    """Everything one invocation needs, resolved from the command line."""

    command: str
    diagram: LinkDiagram
    link_id: str | None = None
    coefficients: Coefficients = ZZ
    variant: str = "standard"
    reduced: bool = False
    basepoint: Marking | None = None
    points: str | None = None
    khi_dim: int | None = None
    quiet: bool = False
    timings: bool = True

    def echo(self) -> dict:
        return {
            "link": self.link_id,
            "diagram": diagram_to_json(self.diagram),
            "coefficients": self.coefficients.name,
            "variant": self.variant,
            "reduced": self.reduced,
        }


# ------------------------------------------------------------------ parsing


def _parse_marking(text: str) -> Marking:
    parts = text.strip().split(":")
    try:
        if len(parts) == 1:
            return Marking(int(parts[0]), 0)
        if len(parts) == 2:
            return Marking(int(parts[0]), int(parts[1]))
    except ValueError:
        pass
    raise UsageError(f"cannot parse marking {text!r}; use arc or arc:offset")


def _load_diagram(args) -> tuple[LinkDiagram, str | None]:
    given = [x for x in (args.pd, args.braid, args.link, args.json) if x is not None]
    if len(given) != 1:
        raise UsageError("give exactly one of --pd, --braid, --link, --json")
    if args.link is not None:
        return get_link(args.link), args.link
    if args.braid is not None:
        if args.strands is None:
            raise UsageError("--braid needs --strands")
        return parse_braid(args.braid, args.strands), None
    if args.json is not None:
        return diagram_from_json(args.json).with_markings(), None
    return parse_pd(args.pd, free_loops=args.free_loops), None


def _markings(d: LinkDiagram, points: str | None, basepoint: Marking | None) -> tuple[Marking, ...]:
    if not points:
        return ()
    if points.strip() == "one-per-component":
        skip = None if basepoint is None else d.component_of(basepoint)
        return tuple(Marking(min(c), 0) for i, c in enumerate(d.components) if i != skip)
    return tuple(_parse_marking(p) for p in points.split(",") if p.strip())


def build_config(args) -> RunConfig:
    d, link_id = _load_diagram(args)
    coeff = Coefficients.parse(getattr(args, "coeff", "Z") or "Z")
    reduced = bool(getattr(args, "reduced", False))
    bp = None
    if getattr(args, "basepoint", None):
        bp = _parse_marking(args.basepoint)
    elif reduced:
        bp = Marking(min(d.components[-1]), 0)
    if bp is not None and not reduced:
        raise UsageError("--basepoint only makes sense with --reduced")
    points = getattr(args, "points", None)
    marks = _markings(d, points, bp)
    d = d.with_markings(marks, bp)
    return RunConfig(
        command=args.command, diagram=d, link_id=link_id, coefficients=coeff,
        variant=getattr(args, "variant", "standard"), reduced=reduced, basepoint=bp, points=points,
        khi_dim=getattr(args, "khi_dim", None), quiet=args.quiet, timings=not args.no_timings,
    )


# ------------------------------------------------------------------ helpers


def _group_json(G: PresentedGroup, c: Coefficients = ZZ) -> dict:
    if c.kind == "Z":
        return {"rank": G.free_rank, "torsion": list(G.torsion), "group": str(G)}
    rep = change_coefficients(G, c)
    return {"rank": rep.rank, "torsion": list(rep.torsion), "group": str(rep)}


def _homology_rows(H, key: str = "h") -> list[dict]:
    rows = []
    for h, q in H.bidegrees():
        row = {key: h, "q": q, "rank": H.rank(h, q)}
        if not H.coefficients.is_field:
            row["torsion"] = list(H.groups[(h, q)].torsion)
        rows.append(row)
    return rows


def _summary(rows: list[dict]) -> dict:
    torsion = sorted(t for r in rows for t in r.get("torsion", ()))
    return {"total_rank": sum(r["rank"] for r in rows), "torsion": torsion}


# ------------------------------------------------------------------ commands


def cmd_kh(cfg: RunConfig) -> tuple[dict, list[str], int]:
    cube = build_cube(cfg.diagram)
    C = cube.complex
    if cfg.reduced:
        C, _ = reduced_complex(cube, cfg.basepoint)
    H = complex_homology(C, cfg.coefficients, lifts=False)
    rows = _homology_rows(H)
    res = {"homology": rows, **_summary(rows), "euler": {str(q): v for q, v in C.euler_characteristic().items()}}
    text = [f"{'h':>4} {'q':>4} {'rank':>5}  torsion"]
    text += [f"{r['h']:>4} {r['q']:>4} {r['rank']:>5}  {r.get('torsion', '')}" for r in rows]
    text.append(f"total rank {res['total_rank']}, torsion {res['torsion']}")
    return res, text, 0


def _pointed(cfg: RunConfig):
    if cfg.reduced:
        return build_reduced_pointed(cfg.diagram, cfg.basepoint, cfg.variant)
    return build_pointed(cfg.diagram, cfg.variant)


def cmd_pointed(cfg: RunConfig) -> tuple[dict, list[str], int]:
    pc = _pointed(cfg)
    H = pointed_homology(pc, cfg.coefficients)
    rows = _homology_rows(H, key="t")
    chains = [{"t": t, "k": k, "rank": v} for (t, k), v in pc.chain_ranks().items()]
    res = {"markings": len(pc.operators), "homology": rows, **_summary(rows), "chain_ranks": chains}
    if not cfg.coefficients.is_field:
        G = PresentedGroup.from_invariants(res["total_rank"], res["torsion"])
        res["group"] = str(G)
    text = [f"{'t':>4} {'q':>4} {'rank':>5}  torsion"]
    text += [f"{r['t']:>4} {r['q']:>4} {r['rank']:>5}  {r.get('torsion', '')}" for r in rows]
    text.append(f"total rank {res['total_rank']}, torsion {res['torsion']}")
    return res, text, 0


def _koszul_of(cfg: RunConfig):
    pc = _pointed(cfg)
    mod = induced_module(pc)
    kc = koszul(mod.group, mod.endos)
    return kc, koszul_homology(kc)


def cmd_koszul(cfg: RunConfig) -> tuple[dict, list[str], int]:
    if not cfg.diagram.markings:
        raise UsageError("koszul needs at least one marking (--points)")
    kc, KH = _koszul_of(cfg)
    groups = [{"k": k, **_group_json(G)} for k, G in enumerate(KH.groups)]
    res = {"markings": kc.l, "groups": groups, "total": str(KH.total.canonical()), "total_rank": KH.rank}
    text = [f"k={g['k']}: {g['group']}" for g in groups]
    text.append(f"total {res['total']} (rank {KH.rank})")
    return res, text, 0


def cmd_ss(cfg: RunConfig) -> tuple[dict, list[str], int]:
    if not cfg.coefficients.is_field:
        raise UsageError(f"ss needs a field; pass --coeff Q or --coeff F<p> (got {cfg.coefficients})")
    pc = _pointed(cfg)
    pages = filtration_ss(pc, cfg.coefficients)
    rep = verify_convergence(pages, pc, cfg.coefficients)
    res = {"markings": pc.l, "pages": [p.to_json() for p in pages], "convergence": rep.to_json()}
    text = []
    for p in pages:
        ent = ", ".join(f"({k},{t}):{v}" for (k, t), v in p.entries.items())
        text.append(f"E_{p.r}: total {p.total}  [{ent}]")
    text.append("converged" if rep.ok else f"MISMATCH: {rep.mismatches[:5]}")
    return res, text, 0 if rep.ok else 1


def _verdict(rank: int, bound: int | None) -> dict:
    if bound is None:
        return {"verdict": "unknown", "rank": rank}
    slack = rank - bound
    v = "violated" if slack < 0 else ("sharp" if slack == 0 else "holds")
    return {"verdict": v, "rank": rank, "bound": bound, "slack": slack}


def cmd_verify(cfg: RunConfig) -> tuple[dict, list[str], int]:
    d = cfg.diagram
    entry = known_khi(cfg.link_id) if cfg.link_id else None
    khi = cfg.khi_dim if cfg.khi_dim is not None else (entry.khi_dim if entry else None)
    source = "override" if cfg.khi_dim is not None else (entry.source if entry else None)
    full = RunConfig("koszul", d.with_markings(d.one_marking_per_component()), cfg.link_id)
    _, KH = _koszul_of(full)
    bp = Marking(min(d.components[-1]), 0)
    red = RunConfig("koszul", d.with_markings(d.one_marking_per_component(skip_last=True), bp),
                    cfg.link_id, reduced=True, basepoint=bp)
    _, KHr = _koszul_of(red)
    unreduced = _verdict(KH.rank, None if khi is None else 2 * khi)
    reduced = _verdict(KHr.rank, khi)
    res = {"khi_dim": khi, "khi_source": source, "unreduced": unreduced, "reduced": reduced,
           "koszul_groups": [str(G) for G in KH.groups], "reduced_koszul_groups": [str(G) for G in KHr.groups]}
    text = [
        f"KHI dim: {khi if khi is not None else 'unknown'}",
        f"2 dim KHI <= rank H(K(X, Kh)):          rank {KH.rank}, {unreduced['verdict']}"
        + (f" (slack {unreduced['slack']})" if "slack" in unreduced else ""),
        f"dim KHI <= rank H(K(X', reduced Kh)):   rank {KHr.rank}, {reduced['verdict']}"
        + (f" (slack {reduced['slack']})" if "slack" in reduced else ""),
    ]
    bad = "violated" in (unreduced["verdict"], reduced["verdict"])
    return res, text, 1 if bad else 0


COMMANDS = {"kh": cmd_kh, "pointed": cmd_pointed, "koszul": cmd_koszul, "ss": cmd_ss, "verify": cmd_verify}


# ------------------------------------------------------------------ argparse


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="khoszul", description="Khovanov, pointed and Koszul homology of links.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, coeff=True, markings=False, variant=False, reduced=False):
        g = sp.add_argument_group("diagram")
        g.add_argument("--pd", help="PD code, e.g. 'X[1,3,2,4] X[3,1,4,2]'")
        g.add_argument("--free-loops", type=int, default=0, help="crossingless components added to --pd")
        g.add_argument("--braid", help="braid word, e.g. 's1 s2^-1 s1'")
        g.add_argument("--strands", type=int)
        g.add_argument("--link", help="catalog id (unknot, unlink:m, hopf, trefoil, trefoil-left, figure-eight)")
        g.add_argument("--json", help="diagram as JSON text")
        if coeff:
            sp.add_argument("--coeff", default="Z", help="Z, Q, Zhalf or F<p> (default Z)")
        if markings:
            sp.add_argument("--points", help="arc:off[,arc:off...] or one-per-component")
        if variant:
            sp.add_argument("--variant", choices=["standard", "doubled"], default="standard")
        if reduced:
            sp.add_argument("--reduced", action="store_true")
            sp.add_argument("--basepoint", help="basepoint as arc or arc:off (default: last component)")
        sp.add_argument("--quiet", action="store_true", help="no text on stderr")
        sp.add_argument("--no-timings", action="store_true", help="omit timings for reproducible JSON")

    common(sub.add_parser("kh", help="Khovanov homology"), reduced=True)
    common(sub.add_parser("pointed", help="pointed Khovanov homology"), markings=True, variant=True, reduced=True)
    common(sub.add_parser("koszul", help="Koszul homology of the induced module"), coeff=False, markings=True,
           variant=True, reduced=True)
    common(sub.add_parser("ss", help="exterior-degree spectral sequence"), markings=True, variant=True, reduced=True)
    v = sub.add_parser("verify", help="rank inequality against known KHI dimensions")
    common(v, coeff=False)
    v.add_argument("--khi-dim", type=int, help="override the KHI dimension")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    t0 = time.perf_counter()
    try:
        cfg = build_config(args)
        res, text, code = COMMANDS[args.command](cfg)
    except (DiagramError, UsageError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (InvariantError, AlgebraError, KoszulError) as e:
        print(f"internal invariant failure: {e}", file=sys.stderr)
        return 3
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    report = {"schema_version": SCHEMA_VERSION, "command": args.command, "input": cfg.echo(), "results": res,
              "ok": code == 0}
    if cfg.timings:
        report["timings"] = {"total_s": round(time.perf_counter() - t0, 6)}
    json.dump(report, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")
    if not cfg.quiet:
        print("\n".join(text), file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
