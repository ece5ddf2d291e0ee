"""Segmentation complexity measures and downsampling guidance."""

__version__ = "0.1.0"
