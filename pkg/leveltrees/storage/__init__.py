"""Golden listing store."""
