"""Minimal factoring and tree comparison."""
