"""Exact rank-one Eisenstein series over function fields, genus integrals, and correspondence-module checks."""

__version__ = "0.1.0"
