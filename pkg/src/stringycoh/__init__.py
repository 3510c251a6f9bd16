"""Stringy cohomology of spaces with one isolated singular point."""

__version__ = "0.1.0"
