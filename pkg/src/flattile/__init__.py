"""Exhaustive enumeration of triangle/square tilings of closed oriented
surfaces, their canonical cyclic covers, lattice counting and volume-form
checks."""

__version__ = "0.1.0"
