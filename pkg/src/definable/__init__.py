"""Exact workbench for first-order definitions of the integers in polynomial rings."""

__version__ = "0.1.0"
