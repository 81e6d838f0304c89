"""
Pseudospectral abscissa package.

Fixed-point iterations, perturbation estimates and reference oracles for the
rightmost point of the ε-pseudospectrum of a matrix or a matrix-valued function.
"""

__version__ = "0.1.0"
