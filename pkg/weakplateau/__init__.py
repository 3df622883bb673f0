"""Discrete Plateau solutions for weak-extreme curves."""

__version__ = "0.1.0"
