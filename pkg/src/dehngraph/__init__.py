"""Computable pieces of the Dehn surgery graph: surgery homology, distance
bounds, quasi-flats, Seifert fibered adjacency, gluing equations and group
weight certificates."""

__version__ = "0.1.0"
