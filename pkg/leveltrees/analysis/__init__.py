"""Symbolic order types and ordinal analysis."""
