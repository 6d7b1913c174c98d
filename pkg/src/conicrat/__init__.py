"""Exact rationality analysis for conic bundles and Chatelet surfaces."""
__version__ = "0.1.0"
