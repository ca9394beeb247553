"""Explicit bounds for the integral of S(t) used in Turing's method."""

__version__ = "0.1.0"
