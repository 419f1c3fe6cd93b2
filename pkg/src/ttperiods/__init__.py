"""Periods of graded rings and period stratifications of finite spectral-space models."""

__version__ = "0.1.0"
