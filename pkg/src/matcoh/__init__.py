"""Exact characteristic cohomology of matroids with quasi-representations."""

__version__ = "0.1.0"
