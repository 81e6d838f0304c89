# psa/problems/base_problem.py
from abc import ABC, abstractmethod
from typing import Any, Dict, Optional, Sequence
import logging

import numpy as np

from ..core import linalg
from ..core.matrix_function import MatrixFunction, describe

logger = logging.getLogger(__name__)


class BaseProblem(ABC):
    """Abstract base class for everything the CLI can run an algorithm on"""

    def __init__(self, problem_id: str, params: Optional[Dict[str, Any]] = None):
        self.problem_id = problem_id
        self.params = dict(params or {})

    @property
    @abstractmethod
    def function(self) -> MatrixFunction:
        """Matrix-valued function T(λ) with its perturbation weights."""

    @property
    def matrix(self) -> Optional[np.ndarray]:
        """The matrix A for matrix problems, None otherwise."""
        return None

    @property
    def is_matrix(self) -> bool:
        return self.matrix is not None

    @property
    def n(self) -> int:
        return self.function.n

    @abstractmethod
    def with_params(self, **params) -> "BaseProblem":
        """Copy with some generator parameters replaced (used by parameter sweeps)."""

    def with_weights(self, weights: Sequence[float]) -> "BaseProblem":
        return FunctionProblem(self.function.with_weights(weights), self.problem_id, self.params)

    def get_problem_info(self) -> Dict[str, Any]:
        info = describe(self.function)
        info.update({"id": self.problem_id, "params": self.params, "is_matrix": self.is_matrix})
        return info


class MatrixProblem(BaseProblem):
    """T(λ) = λI − A under unstructured perturbations of A."""

    def __init__(self, A, problem_id: str = "A", params: Optional[Dict[str, Any]] = None, rebuild=None):
        super().__init__(problem_id, params)
        self.A = linalg.as_matrix(A)
        self._function = MatrixFunction.from_matrix(self.A, name=problem_id)
        self._rebuild = rebuild

    @property
    def function(self) -> MatrixFunction:
        return self._function

    @property
    def matrix(self) -> np.ndarray:
        return self.A

    def with_params(self, **params) -> "MatrixProblem":
        if self._rebuild is None:
            raise ValueError(f"Problem '{self.problem_id}' has no sweepable parameters")
        return self._rebuild(**{**self.params, **params})

    def with_weights(self, weights: Sequence[float]) -> BaseProblem:
        if tuple(weights) == (0.0, 1.0):
            return self
        return super().with_weights(weights)


class FunctionProblem(BaseProblem):
    """A general matrix-valued function."""

    def __init__(self, T: MatrixFunction, problem_id: str = "T", params: Optional[Dict[str, Any]] = None,
                 rebuild=None):
        super().__init__(problem_id, params)
        self._function = T
        self._rebuild = rebuild

    @property
    def function(self) -> MatrixFunction:
        return self._function

    def with_params(self, **params) -> "FunctionProblem":
        if self._rebuild is None:
            raise ValueError(f"Problem '{self.problem_id}' has no sweepable parameters")
        problem = self._rebuild(**{**self.params, **params})
        return problem.with_weights(self._function.weights) if problem.function.kappa == self._function.kappa else problem

    def with_weights(self, weights: Sequence[float]) -> "FunctionProblem":
        return FunctionProblem(self._function.with_weights(weights), self.problem_id, self.params, self._rebuild)
