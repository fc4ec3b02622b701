"""Skewed Sipser functions, random projections and the projection switching lemma."""
__version__ = "0.1.0"
