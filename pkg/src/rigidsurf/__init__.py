"""Exact-arithmetic verification of a rigid, not infinitesimally rigid
surface built from a plane line arrangement via an abelian cover."""

__version__ = "0.1.0"
