"""Exact laboratory for the planar Ising / spin network generating-series duality."""

__version__ = "0.1.0"
