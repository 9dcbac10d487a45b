"""Exact-arithmetic Kronecker module calculus with certified
large-submodule decompositions."""

__version__ = "0.1.0"
