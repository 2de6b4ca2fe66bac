"""Exact-arithmetic lab for distinct-distance counting, incidence geometry and polynomial partitioning."""

__version__ = "0.1.0"
