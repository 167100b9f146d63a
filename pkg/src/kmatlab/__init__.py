"""Exact computation of quantum R-matrices and K-matrices for
quantum symmetric pairs, over Q(q^(1/D))."""

__version__ = "0.1.0"
