"""Exact linkage and colinkage of graded modules over quotients of
polynomial rings, with executable checks for the structure theorems."""

from .ring import RingCtx, Poly, make_ring, parse_poly, render_poly, compare_monomials
from .modules import (
    GradedModule,
    ModuleMap,
    cyclic_module,
    free_module,
    invariants,
    subquotient,
)
from .homalg import ext, free_resolution, syzygy, tor, transpose
from .linkage import canonical_module, cyclic_link, link_operator, reflexive_epi
from .colinkage import colink_operator, coreflexive_epi, foxby_transform
from .verdict import Verdict

__all__ = [
    "RingCtx",
    "Poly",
    "make_ring",
    "parse_poly",
    "render_poly",
    "compare_monomials",
    "GradedModule",
    "ModuleMap",
    "cyclic_module",
    "free_module",
    "invariants",
    "subquotient",
    "ext",
    "free_resolution",
    "syzygy",
    "tor",
    "transpose",
    "canonical_module",
    "cyclic_link",
    "link_operator",
    "reflexive_epi",
    "colink_operator",
    "coreflexive_epi",
    "foxby_transform",
    "Verdict",
]

__version__ = "0.1.0"
