"""Directed type theory kernel, finite-category semantics, and PV-grid tools."""

__version__ = "0.1.0"
