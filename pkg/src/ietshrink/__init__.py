"""Exact interval exchange transformations and shrinking-target experiments."""

__version__ = "0.1.0"
