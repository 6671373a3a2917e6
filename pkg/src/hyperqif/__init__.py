"""Quantitative information flow over environments of strategies."""

__version__ = "0.1.0"
