"""Numerical harmonic analysis on the isotropic cone of an indefinite quadratic form."""

__version__ = "0.1.0"
