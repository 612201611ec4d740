"""Numerical toolkit for optimal Kato constants of p-harmonic maps."""

__version__ = "0.1.0"
