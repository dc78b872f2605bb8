"""Combinatorial homological mirror symmetry for smooth projective toric varieties."""
from .lattice import (
    EmptyPolytopeError,
    Fan,
    FanError,
    ToricVariety,
    face_poset,
    h_function,
    lattice_points,
    polytope_from_support,
    validate_fan,
)

__version__ = "0.1.0"

__all__ = [
    "EmptyPolytopeError",
    "Fan",
    "FanError",
    "ToricVariety",
    "face_poset",
    "h_function",
    "lattice_points",
    "polytope_from_support",
    "validate_fan",
]
