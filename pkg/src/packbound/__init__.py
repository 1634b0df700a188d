"""Exact bounding-area packing and certified packing-efficiency bounds."""

__version__ = "0.1.0"
