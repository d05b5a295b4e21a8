"""Exact computations for double-coset operator algebras on lattices:
Satake transforms, coset oracles, amplifier linear systems, and
integer-matrix counting experiments."""

__version__ = "0.1.0"
