"""Quantum Weyl group operators, quantum matrix spaces and Casimir monodromy checks."""

__version__ = "0.1.0"
