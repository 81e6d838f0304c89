# psa/problems/problem_factory.py
import logging
from typing import Any, Callable, Dict, List, Optional, Sequence

import numpy as np
from pydantic import ValidationError

from ..errors import InputError
from ..utils.spec_parser import parse_problem_spec
from .base_problem import BaseProblem, FunctionProblem, MatrixProblem
from .generators import DampingSpec, damping_function, gen_named
from .matrix_market import load_matrix_market

logger = logging.getLogger(__name__)

DEFAULT_DAMPER_INDEX = 2
SECOND_DAMPER_INDEX = 19


def _problem_id(name: str, params: Dict[str, Any]) -> str:
    if not params:
        return name
    return f"{name}:" + ",".join(f"{k}={v}" for k, v in params.items())


def _build_damping(**params) -> FunctionProblem:
    """Damped chain; nu/at place one damper, nu1 and nu2 set dampers at nodes 2 and 19."""
    params = dict(params)
    nu = float(params.pop("nu", 0.0))
    at = int(params.pop("at", DEFAULT_DAMPER_INDEX))
    nu1 = float(params.pop("nu1", 0.0))
    nu2 = float(params.pop("nu2", 0.0))
    placed = [(at, nu), (DEFAULT_DAMPER_INDEX, nu1), (SECOND_DAMPER_INDEX, nu2)]
    try:
        spec = DampingSpec(**params, dampers=[(idx, v) for idx, v in placed if v])
    except ValidationError as e:
        raise InputError(f"Invalid damping parameters: {e}") from e
    all_params = dict(params)
    if nu:
        all_params.update(nu=nu, at=at)
    all_params.update({name: v for name, v in (("nu1", nu1), ("nu2", nu2)) if v})
    return FunctionProblem(damping_function(spec), _problem_id("damping", all_params), all_params,
                           rebuild=_build_damping)


def _named_builder(name: str) -> Callable[..., MatrixProblem]:
    def build(**params) -> MatrixProblem:
        if "n" not in params:
            raise InputError(f"'{name}' needs a size, e.g. {name}:100")
        args = dict(params)
        A = gen_named(name, args.pop("n"), **args)
        return MatrixProblem(A, _problem_id(name, params), params, rebuild=build)

    return build


class ProblemFactory:
    """Factory class for creating problems from generator specs or files"""

    # Registry of available generators
    _generator_registry: Dict[str, Callable[..., BaseProblem]] = {
        "damping": _build_damping,
        "grcar": _named_builder("grcar"),
        "kahan": _named_builder("kahan"),
        "random": _named_builder("random"),
    }

    @classmethod
    def create_problem(cls, spec: str) -> BaseProblem:
        """
        Create a problem from a generator spec such as 'grcar:100'.

        Raises:
            InputError: If the generator is unknown or its parameters are invalid
        """
        name, params = parse_problem_spec(spec)
        if name not in cls._generator_registry:
            raise InputError(
                f"Unsupported generator: {name}. "
                f"Available generators: {cls.get_available_types()}"
            )
        logger.info(f"Creating problem {name} with params {params}")
        return cls._generator_registry[name](**params)

    @classmethod
    def from_file(cls, path: str, feedback: Optional[Sequence[str]] = None, nu: float = 0.0) -> MatrixProblem:
        """Matrix problem from a Matrix Market file, optionally A + ν·B·Cᵀ with B, C from files."""
        A = load_matrix_market(path)
        if not feedback:
            return MatrixProblem(A, path, {"input": path})

        if len(feedback) != 2:
            raise InputError("Feedback needs two files: B.mtx,C.mtx")
        B = _load_factor(feedback[0], A.shape[0])
        C = _load_factor(feedback[1], A.shape[0])
        if B.shape[1] != C.shape[1]:
            raise InputError(f"Feedback factors have {B.shape[1]} and {C.shape[1]} columns")

        def build(**params) -> MatrixProblem:
            gain = float(params.get("nu", 0.0))
            return MatrixProblem(A + gain * (B @ C.T), f"{path}:nu={gain}", {"input": path, "nu": gain},
                                 rebuild=build)

        return build(nu=nu)

    @classmethod
    def register_generator(cls, name: str, builder: Callable[..., BaseProblem]) -> None:
        cls._generator_registry[name.lower()] = builder
        logger.info(f"Registered new generator: {name}")

    @classmethod
    def get_available_types(cls) -> List[str]:
        return list(cls._generator_registry.keys())


def _load_factor(path: str, n: int) -> np.ndarray:
    M = load_matrix_market(path, square=False)
    if M.shape[0] != n:
        raise InputError(f"Feedback factor {path} has {M.shape[0]} rows, expected {n}")
    return M
