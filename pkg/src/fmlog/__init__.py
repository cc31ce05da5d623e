"""Exact models of the Fulton-MacPherson operad, simple screens and their log structures."""

__version__ = "0.1.0"
