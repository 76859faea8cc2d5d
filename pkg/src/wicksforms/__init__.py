"""Wicks forms, surface graphs, genus and commutator forms in free and hyperbolic groups."""

__version__ = "0.1.0"

from .errors import ConstructionError, DomainError, LimitError, WicksError
from .words import commutator, cyclic_reduce, format_word, free_reduce, inverse, parse_word
from .oracle import BoundConstants, GroupOracle, Presentation, bound_constants, free_group, surface_group
from .surface import SurfaceGraph, build_surface_graph, enumerate_wicks_forms, is_wicks_form
from .thin import GeodesicPolygon, build_subdivision, check_polygon, delta_scan
from .genus import GenusCaps, GenusResult, GenusWitness, brute_force_genus, verify_genus_witness
from .extension import ExtensionPlan, build_extension, verify_extension
from .forms import CommutatorForm, match_commutator, synthesize, verify_form, wicks_match_free

__all__ = [
    "BoundConstants", "CommutatorForm", "ConstructionError", "DomainError", "ExtensionPlan",
    "GenusCaps", "GenusResult", "GenusWitness", "GeodesicPolygon", "GroupOracle", "LimitError",
    "Presentation", "SurfaceGraph", "WicksError", "bound_constants", "brute_force_genus",
    "build_extension", "build_subdivision", "build_surface_graph", "check_polygon", "commutator",
    "cyclic_reduce", "delta_scan", "enumerate_wicks_forms", "format_word", "free_group",
    "free_reduce", "inverse", "is_wicks_form", "match_commutator", "parse_word", "surface_group",
    "synthesize", "verify_extension", "verify_form", "verify_genus_witness", "wicks_match_free",
]
