"""Generalized torsion and 0-surgeries on double twist knots."""

__version__ = '0.1.0'
