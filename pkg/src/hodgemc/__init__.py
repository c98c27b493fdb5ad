"""Hodge numerical invariants under middle convolution with Kummer modules."""

__version__ = "0.1.0"
