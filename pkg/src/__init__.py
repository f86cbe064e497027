"""
KHA engine

Exact computer algebra for K-theoretic Hall algebras of A_n quivers, the
positive half of the quantum loop group, and the K-theory of partial flag
varieties.
"""

__version__ = "0.1.0"

__all__ = ["__version__"]
