"""Listing renderers."""
