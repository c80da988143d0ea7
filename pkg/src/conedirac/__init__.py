"""Spectral toolkit for Dirac operators with MIT bag conditions on circular cones."""

__version__ = "0.1.0"
