"""Mutually unbiased bases over Galois fields, complex Hadamard matrices,
phase-space tools and the searches around them."""

from .gf import GfSpec, gf_for, gf_new
from .mub import MubSet, mub_for

__all__ = ["GfSpec", "gf_for", "gf_new", "MubSet", "mub_for"]
__version__ = "0.1.0"
