"""Numerical laboratory for field theory on the Moyal plane."""

__version__ = "0.1.0"
