"""Anchored rectangle packing in the unit square."""

__version__ = "0.1.0"
