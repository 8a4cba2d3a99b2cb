"""Exact census toolkit for decomposable integer polynomials."""

__version__ = "0.1.0"

from . import asymptotics, census, decompose, mahler, poly_core  # noqa: F401
