"""Stochastic-Liouville simulation of FSRS and shaped-pulse transient absorption."""

__version__ = "0.1.0"
