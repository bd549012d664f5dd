"""Exact homology and cohomology for cubical sets, semi-cubical sets, and small categories."""

__version__ = "0.1.0"
