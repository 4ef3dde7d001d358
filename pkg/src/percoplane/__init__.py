"""Oriented percolation on planar mixed graphs.

Building blocks for verifying conditional positive-association statements on
finite percolation models: exact planar embeddings, duals with boundary
vertices, the leftmost/rightmost-path resampling chain, the contact-process
graphical representation with its space-time discretization, and exact
rational enumeration of conditioned joint laws.
"""

__version__ = "0.1.0"
