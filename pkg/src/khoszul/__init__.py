"""Khovanov homology, pointed Khovanov homology and Koszul complexes over R_m."""

__version__ = "0.1.0"

from .link import LinkDiagram, Marking, DiagramError, parse_pd, parse_braid, mirror, resolve  # noqa: E402
from .khovanov import build_cube, kh, basepoint_operator, reduced_complex, induced_action  # noqa: E402
from .pointed import PointedComplex, build_pointed, build_reduced_pointed, pointed_homology  # noqa: E402
from .koszul import (  # noqa: E402
    KoszulComplex,
    SpectralPage,
    filtration_ss,
    koszul,
    koszul_homology,
    verify_convergence,
)
from .catalog import get_link, known_khi  # noqa: E402

__all__ = [
    "LinkDiagram", "Marking", "DiagramError", "parse_pd", "parse_braid", "mirror", "resolve",
    "build_cube", "kh", "basepoint_operator", "reduced_complex", "induced_action",
    "PointedComplex", "build_pointed", "build_reduced_pointed", "pointed_homology",
    "KoszulComplex", "SpectralPage", "filtration_ss", "koszul", "koszul_homology", "verify_convergence",
    "get_link", "known_khi",
]
