"""Unitary-transformation treatment of a laser-driven trapped ion on a truncated Fock space."""

__version__ = "0.1.0"
