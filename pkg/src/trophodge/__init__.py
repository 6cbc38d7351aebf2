"""Exact computations on tropical curves, their canonical linear systems and
the tropical Hodge bundle."""

__version__ = "0.1.0"
