"""Exact differential-operator algebra and rank-2 commuting pairs."""

__version__ = "0.1.0"
