"""Weighted L2 estimates for the Dirac operator in Clifford analysis."""
