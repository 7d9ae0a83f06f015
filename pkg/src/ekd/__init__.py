"""Certified computations around the polytopes E_{k,d} and conjugate moduli of trinomials."""

__version__ = "0.1.0"
