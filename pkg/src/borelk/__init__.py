"""Exact computations with representation rings, their completions and the Borel map."""

__version__ = "0.1.0"

from .laurent import LaurentPoly, StructuralError, augment, act, parse_poly, format_poly
from .rootdata import RootDatum, WeylGroup, generate_weyl, preset, parse_root_datum

__all__ = [
    "LaurentPoly", "StructuralError", "augment", "act", "parse_poly", "format_poly",
    "RootDatum", "WeylGroup", "generate_weyl", "preset", "parse_root_datum",
]
