"""Donaldson-Thomas and BPS invariants of quivers with potential from finite-field counts."""

__version__ = "0.1.0"
