"""Representation learning for hand-head motion."""

__version__ = "0.1.0"
