"""Numerical laboratory for the addition law of the principal matrix logarithm."""
__version__ = "0.1.0"
