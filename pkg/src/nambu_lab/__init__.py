"""Exact computations for n-ary Nambu-Lie superalgebras and their cohomology."""

__version__ = "0.1.0"
