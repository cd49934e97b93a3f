"""Numerical toolkit for an explicit GL(2) Voronoi summation formula with a
p-adic test function at one prime, and its supporting local analysis."""

__version__ = "0.1.0"
