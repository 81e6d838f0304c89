"""
Algorithms package.

Fixed-point iterations for the pseudospectral abscissa, first- and
second-order estimates and the restart driver.
"""
# psa/algorithms/__init__.py
from .base_iteration import BaseFixedPoint, FixedPointConfig, IterateTrace, PsaResult
from .fixedpoint import FpMatrix, FpNep, FpNepConst, FpNepScaled, fp_matrix, fp_nep, fp_nep_const, fp_nep_scaled
from .algorithm_factory import AlgorithmFactory
from .restarts import run_with_restarts

__all__ = [
    'BaseFixedPoint',
    'FixedPointConfig',
    'IterateTrace',
    'PsaResult',
    'FpMatrix',
    'FpNep',
    'FpNepConst',
    'FpNepScaled',
    'fp_matrix',
    'fp_nep',
    'fp_nep_const',
    'fp_nep_scaled',
    'AlgorithmFactory',
    'run_with_restarts',
]
