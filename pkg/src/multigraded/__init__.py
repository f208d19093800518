"""Exact computations with multigraded modules over non-standard graded polynomial rings."""

__version__ = "0.1.0"
