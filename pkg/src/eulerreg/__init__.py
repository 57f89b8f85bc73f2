"""Entropy-consistent viscous regularization of the compressible Euler equations."""
