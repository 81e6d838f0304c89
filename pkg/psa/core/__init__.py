"""
Numerical core: dense linear algebra helpers, matrix-valued functions and
their structured perturbation quantities.
"""
# psa/core/__init__.py
from .linalg import EigenSystem, SingularTriple, min_singular_triple, rightmost
from .matrix_function import MatrixFunction, Perturbation, ScalarFunction

__all__ = [
    'EigenSystem',
    'SingularTriple',
    'min_singular_triple',
    'rightmost',
    'MatrixFunction',
    'Perturbation',
    'ScalarFunction',
]
