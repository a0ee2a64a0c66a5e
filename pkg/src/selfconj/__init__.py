"""Exact computations for correlation functions of random self-conjugate partitions."""

__version__ = "0.1.0"
