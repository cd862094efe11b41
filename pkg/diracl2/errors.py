# diracl2/errors.py
"""
Exception hierarchy shared by every subsystem.
"""

from __future__ import annotations


class DiracL2Error(Exception):
    """Root of all package errors."""


class DimensionError(DiracL2Error, ValueError):
    """Mismatched or unsupported algebra parameter n, blade or grid shape."""


class ScalarKindError(DiracL2Error, TypeError):
    """float64 and exact-rational values were mixed in one operation."""


class GridError(DiracL2Error, ValueError):
    """Invalid grid geometry or a point that must lie inside the box does not."""


class WeightError(DiracL2Error, ValueError):
    """Unknown weight family, bad weight parameters, or a weight refused by a report."""


class NumericError(DiracL2Error, ArithmeticError):
    """Non-finite values, degenerate parameters or a breakdown inside a numeric kernel."""


class BoundUndefinedError(DiracL2Error):
    """The right-hand-side functional needs Δφ > 0 wherever f is nonzero."""


class ConfigError(DiracL2Error, ValueError):
    """Invalid run configuration."""
