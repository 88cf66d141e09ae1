"""Computational experiments around l-torsion in class groups of quadratic fields."""

__version__ = "0.1.0"
