"""Exact structure constants of the quantum Kaehler sub-ring of projective hypersurfaces."""

__version__ = "0.1.0"
