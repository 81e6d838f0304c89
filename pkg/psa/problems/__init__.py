"""
Problems package: test-problem generators, Matrix Market I/O and the
factory that turns CLI problem specs into problems.
"""
# psa/problems/__init__.py
from .base_problem import BaseProblem, FunctionProblem, MatrixProblem
from .problem_factory import ProblemFactory

__all__ = ['BaseProblem', 'FunctionProblem', 'MatrixProblem', 'ProblemFactory']
