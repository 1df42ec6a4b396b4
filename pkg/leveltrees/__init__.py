"""leveltrees: descriptions, tensor products and order types of level <=3 trees."""

__version__ = "0.1.0"
