"""
Reference oracles for the pseudospectral abscissa.
"""
# psa/oracle/__init__.py
from .grid import OracleResult, Region, boundary_samples, grid_psa
from .crisscross import crisscross_matrix

__all__ = ['OracleResult', 'Region', 'boundary_samples', 'grid_psa', 'crisscross_matrix']
