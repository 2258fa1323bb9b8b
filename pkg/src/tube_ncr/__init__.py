"""Exact symbolic workbench for cyclic-quiver tube algebras and their
marked-surface, toric, and derived-contraction incarnations."""

__version__ = "0.1.0"
