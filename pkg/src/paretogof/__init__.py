"""Goodness-of-fit tests for the Pareto law built on a ratio characterization."""

__version__ = "0.1.0"
