# psa/algorithms/algorithm_factory.py
import logging
from typing import Dict, List, Type

from ..config import Config
from .base_iteration import BaseFixedPoint, FixedPointConfig
from .fixedpoint import FpMatrix, FpNep, FpNepConst, FpNepScaled

logger = logging.getLogger(__name__)


class AlgorithmFactory:
    """Factory class for creating fixed-point iterations by their CLI name"""

    # Registry of available fixed-point algorithms
    _algorithm_registry: Dict[str, Type[BaseFixedPoint]] = {
        "fp-nep": FpNep,
        "fp-nep-const": FpNepConst,
        "fp-nep-scaled": FpNepScaled,
        "fp-matrix": FpMatrix,
    }

    @classmethod
    def create_algorithm(cls, name: str, target, cfg: FixedPointConfig) -> BaseFixedPoint:
        """
        Create an iteration instance.

        Args:
            name: Algorithm name ('fp-nep', 'fp-nep-const', 'fp-nep-scaled', 'fp-matrix')
            target: MatrixFunction for the NEP iterations, a square matrix for fp-matrix
            cfg: Iteration settings

        Returns:
            Instance of the requested iteration

        Raises:
            ValueError: If the algorithm name is not supported
        """
        name = name.lower().strip()

        if name not in cls._algorithm_registry:
            raise ValueError(
                f"Unsupported algorithm: {name}. "
                f"Available algorithms: {cls.get_available_types()}"
            )

        algorithm_class = cls._algorithm_registry[name]
        logger.debug(f"Creating {name} iteration")
        return algorithm_class(target, cfg)

    @classmethod
    def register_algorithm(cls, name: str, algorithm_class: type) -> None:
        if not issubclass(algorithm_class, BaseFixedPoint):
            raise ValueError("Algorithm class must inherit from BaseFixedPoint")

        cls._algorithm_registry[name.lower()] = algorithm_class
        logger.info(f"Registered new algorithm: {name}")

    @classmethod
    def get_available_types(cls) -> List[str]:
        return list(cls._algorithm_registry.keys())

    @classmethod
    def is_matrix_algorithm(cls, name: str) -> bool:
        return Config.get_algorithm_config(name).get("problem") == "matrix"
