"""Statevector emulation of quantum-chemistry simulation algorithms."""

__version__ = "0.1.0"
