"""Canonical JSON codec."""
