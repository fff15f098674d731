"""Numerical Gaussian harmonic analysis on variable-exponent Lebesgue spaces."""

__version__ = "0.1.0"
