"""Spectral gap decisions for affine actions on tori, with numeric corroboration."""

__version__ = "0.1.0"
