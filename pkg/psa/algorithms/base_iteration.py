# psa/algorithms/base_iteration.py
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Dict, List, Literal, Optional
import logging
import time

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from ..config import Config
from ..core import linalg, nep
from ..core.matrix_function import MatrixFunction
from ..errors import PsaError

logger = logging.getLogger(__name__)

Termination = Literal["absolute_complex", "relative_real"]
Status = Literal["converged", "max_iter", "stagnated", "failed"]
NepInit = Literal["largest_imag", "first_order", "score"]
MatrixInit = Literal["first", "second", "hybrid"]


class FixedPointConfig(BaseModel):
    """Settings shared by every fixed-point iteration"""

    model_config = ConfigDict(frozen=True)

    eps: float = Field(ge=0, allow_inf_nan=False)
    tol: float = Field(default_factory=lambda: Config.DEFAULT_TOL, gt=0)
    max_iter: int = Field(default_factory=lambda: Config.DEFAULT_MAX_ITER, ge=1)
    termination: Optional[Termination] = None
    tie_rule: linalg.TieRule = "largest_imag"
    restarts: int = Field(default_factory=lambda: Config.DEFAULT_RESTARTS, ge=1)
    inner_tol: Optional[float] = Field(default=None, gt=0)
    inner_max: int = Field(default_factory=lambda: Config.INNER_MAX, ge=1)
    init: Optional[str] = None
    stagnation_window: int = Field(default_factory=lambda: Config.STAGNATION_WINDOW, ge=2)
    stagnation_rtol: float = Field(default_factory=lambda: Config.STAGNATION_RTOL, gt=0)

    @model_validator(mode="after")
    def _check_init(self):
        allowed = ("largest_imag", "first_order", "score", "first", "second", "hybrid")
        if self.init is not None and self.init not in allowed:
            raise ValueError(f"init must be one of {allowed}, got '{self.init}'")
        return self

    @property
    def effective_inner_tol(self) -> float:
        return self.inner_tol if self.inner_tol is not None else self.tol / 10


@dataclass
class DirectionSummary:
    """Smallest singular value at the point and the phase-fixing scalar after rotation."""

    sigma: float
    inner: complex


@dataclass
class IterateTrace:
    iterates: List[complex] = field(default_factory=list)
    values: List[float] = field(default_factory=list)
    directions: List[DirectionSummary] = field(default_factory=list)
    status: Status = "max_iter"
    message: str = ""

    def append(self, z: complex):
        self.iterates.append(complex(z))
        self.values.append(float(np.real(z)))

    @property
    def iterations(self) -> int:
        """Number of fixed-point steps; z_0 is not counted."""
        return max(len(self.iterates) - 1, 0)

    @property
    def last(self) -> complex:
        return self.iterates[-1] if self.iterates else complex(np.nan, np.nan)


@dataclass
class PsaResult:
    alpha: float
    z: complex
    trace: IterateTrace
    rbvt: Optional[nep.RbvtReport] = None
    restart_index: int = 0
    algorithm: str = ""
    runs: List[IterateTrace] = field(default_factory=list)
    wall_time_ms: float = 0.0

    @property
    def status(self) -> Status:
        return self.trace.status

    @property
    def iterations(self) -> int:
        return self.trace.iterations

    @property
    def converged(self) -> bool:
        return self.trace.status == "converged"

    def summary(self) -> Dict[str, Any]:
        return {
            "algorithm": self.algorithm,
            "alpha": self.alpha,
            "z": self.z,
            "iterations": self.iterations,
            "status": self.status,
            "restart_index": self.restart_index,
            "rbvt": self.rbvt.verdict.value if self.rbvt is not None else None,
        }


class BaseFixedPoint(ABC):
    """Abstract driver for the fixed-point iterations.

    Subclasses supply the starting point, the initial perturbation, the
    rightmost-eigenvalue subproblem and the direction update. The loop,
    termination, stagnation detection and error capture live here.
    """

    name = "base"
    default_termination: Termination = "absolute_complex"

    def __init__(self, cfg: FixedPointConfig):
        self.cfg = cfg
        self.termination: Termination = cfg.termination or self.default_termination
        logger.debug(f"Initializing {self.name} with eps={cfg.eps}, tol={cfg.tol}, termination={self.termination}")

    @property
    @abstractmethod
    def function(self) -> MatrixFunction:
        """Matrix-valued function used for the boundary check of the final point."""

    @abstractmethod
    def initial_point(self) -> complex:
        pass

    @abstractmethod
    def direction_at(self, z: complex):
        """Perturbation for the next step, built from the smallest singular triple at z."""

    @abstractmethod
    def next_point(self, direction, z_prev: complex) -> complex:
        """Rightmost eigenvalue of the function perturbed by ε·direction."""

    def initial_direction(self, z0: complex):
        return self.direction_at(z0)

    def _record(self, sigma: float, inner: complex):
        self._trace.directions.append(DirectionSummary(sigma=float(sigma), inner=complex(inner)))

    def terminated(self, z: complex, z_prev: complex) -> bool:
        if self.termination == "relative_real":
            return abs(z.real - z_prev.real) < self.cfg.tol * max(1.0, abs(z_prev.real))
        return abs(z - z_prev) < self.cfg.tol

    def stagnated(self, iterates: List[complex]) -> bool:
        """Period-2 cycling: z_i ≈ z_{i-2} over the whole window while z_i and z_{i-1} stay apart."""
        window = self.cfg.stagnation_window
        if len(iterates) < window + 2:
            return False
        tail = iterates[-window - 2:]
        for i in range(2, len(tail)):
            scale = self.cfg.stagnation_rtol * max(1.0, abs(tail[i]))
            if abs(tail[i] - tail[i - 2]) > scale:
                return False
            if abs(tail[i] - tail[i - 1]) <= 10 * scale:
                return False
        return True

    def run(self, z0: Optional[complex] = None) -> PsaResult:
        start = time.perf_counter()
        trace = IterateTrace()
        self._trace = trace
        rbvt = None
        try:
            z_prev = complex(self.initial_point() if z0 is None else z0)
            trace.append(z_prev)
            logger.info(f"{self.name}: eps={self.cfg.eps}, z0={z_prev:.8g}")
            direction = self.initial_direction(z_prev)

            for k in range(1, self.cfg.max_iter + 1):
                z = self.next_point(direction, z_prev)
                trace.append(z)
                logger.debug(f"{self.name} iter {k}: z={z:.12g}")
                if self.terminated(z, z_prev):
                    trace.status = "converged"
                    break
                if self.stagnated(trace.iterates):
                    trace.status = "stagnated"
                    trace.message = f"iterates cycle between two points after {k} steps"
                    break
                direction = self.direction_at(z)
                z_prev = z
            else:
                trace.status = "max_iter"
                trace.message = f"no convergence in {self.cfg.max_iter} iterations"
        except PsaError as e:
            logger.error(f"{self.name} failed: {e}")
            trace.status = "failed"
            trace.message = str(e)

        z_final = trace.last
        if trace.status != "failed":
            try:
                rbvt = nep.rbvt_check(self.function, z_final, self.cfg.eps)
            except PsaError as e:
                logger.warning(f"Boundary check at z={z_final:.8g} unavailable: {e}")
        if trace.status in ("max_iter", "stagnated"):
            logger.warning(f"{self.name} did not converge: {trace.message}")

        elapsed = (time.perf_counter() - start) * 1000
        logger.info(f"{self.name} finished: status={trace.status}, iterations={trace.iterations}, "
                    f"z={z_final:.10g}, time={elapsed:.1f}ms")
        return PsaResult(
            alpha=float(z_final.real),
            z=z_final,
            trace=trace,
            rbvt=rbvt,
            algorithm=self.name,
            runs=[trace],
            wall_time_ms=elapsed,
        )
