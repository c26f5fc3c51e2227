"""Arithmetic classification of pure cubic fields and their Kummer closures."""

__version__ = "0.1.0"
