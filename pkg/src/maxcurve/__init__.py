"""Machine verification of a genus-5 curve over F_3 with 13 rational points."""

__version__ = "0.1.0"
