"""Homomorphism complexes, equivariant degree invariants, and torus cohomology."""

__version__ = "0.1.0"
