"""Exact verification of sharpened Hadamard-type determinant inequalities."""

__version__ = "0.1.0"
