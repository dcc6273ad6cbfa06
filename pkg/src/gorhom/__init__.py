"""Exact graded commutative algebra: quotient rings, explicit modules,
minimal resolutions and Ext/Tor tables over Q and F_p."""

__version__ = "0.1.0"
