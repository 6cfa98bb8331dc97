"""Specification properties, mixing and chaos checks for non-autonomous discrete systems."""

__version__ = "0.1.0"
