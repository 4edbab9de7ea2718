"""Exact-arithmetic certificates for mode stability of a self-similar blowup profile."""

__version__ = "0.1.0"
