"""Symmetric-power period polynomials: critical L-values, zero certificates, lemma checks."""

__version__ = "0.1.0"
