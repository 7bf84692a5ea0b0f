"""Neron-Severi and holomorphic topological Brauer groups of complex tori,
with exact Appell-Humbert cocycles for line bundles and gerbes."""

__version__ = "0.1.0"
