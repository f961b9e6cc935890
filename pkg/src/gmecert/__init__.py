"""Certifying genuine multipartite entanglement near graph states from low-weight stabilizer data."""

__version__ = "0.1.0"
