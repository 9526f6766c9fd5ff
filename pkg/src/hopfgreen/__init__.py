"""Exact computations with cocommutative Hopf structures on truncated polynomial algebras."""

__version__ = "0.1.0"
