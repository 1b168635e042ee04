"""Weakly globular double categories on finite presentations."""
__version__ = "0.1.0"
