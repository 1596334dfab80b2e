"""Finite unit-distance witness sets in Q^8 and a symbolic engine for D_n."""
__version__ = "0.1.0"
