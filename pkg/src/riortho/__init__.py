"""R_I recurrences, para-orthogonal pairs, and Toeplitz coefficient systems."""

__version__ = "0.1.0"
