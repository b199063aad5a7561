"""Exact computations with finite racks: type D, rack homology, cocycles, Nichols algebras."""

__version__ = "0.1.0"
