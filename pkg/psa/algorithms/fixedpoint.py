# psa/algorithms/fixedpoint.py
"""The four fixed-point iterations for the ε-pseudospectral abscissa.

Each step moves to the rightmost eigenvalue of the function perturbed by
ε times a unit rank-one direction, then rebuilds the direction from the
smallest singular triple at the new point, re-phased so that the
perturbation pushes that eigenvalue furthest to the right.
"""
import logging
from typing import Optional, Tuple

import numpy as np

from ..core import linalg, nep
from ..core.matrix_function import MatrixFunction, Perturbation
from ..errors import DegenerateError, InputError, KernelError
from .approx import first_order_scores_nep, init_point_matrix, init_point_nep
from .base_iteration import BaseFixedPoint, FixedPointConfig, PsaResult

logger = logging.getLogger(__name__)

NEP_INITS = ("largest_imag", "first_order", "score")


def _unit_phase(c: complex, where: complex) -> complex:
    if c == 0 or not np.isfinite(c):
        raise DegenerateError(f"Phase-fixing scalar vanishes at z={where:.6g}")
    return c / abs(c)


class NepFixedPoint(BaseFixedPoint):
    """Common parts of the iterations on a matrix-valued function."""

    def __init__(self, T: MatrixFunction, cfg: FixedPointConfig):
        super().__init__(cfg)
        self.T = T

    @property
    def function(self) -> MatrixFunction:
        return self.T

    def initial_point(self) -> complex:
        init = self.cfg.init or "largest_imag"
        if init not in NEP_INITS:
            raise InputError(f"Initialization '{init}' is not available for {self.name}. Available: {NEP_INITS}")
        if init == "score":
            return first_order_scores_nep(self.T, self.cfg.eps).argmax.mu
        if init == "first_order":
            return init_point_nep(self.T, self.cfg.eps)
        values = self.T.eigenvalues()
        values = values[np.isfinite(values)]
        if values.size == 0:
            raise KernelError(f"{self.T.name} has no finite eigenvalues")
        return complex(values[np.argmax(values.imag)])

    def rightmost_of(self, F: MatrixFunction, z_prev: complex) -> complex:
        values = F.eigenvalues(extra_seeds=(z_prev,))
        return linalg.rightmost_value(values, self.cfg.tie_rule)


class FpNep(NepFixedPoint):
    """Weighted block perturbations of every coefficient."""

    name = "fp-nep"

    def direction_at(self, z: complex) -> Perturbation:
        T = self.T
        g, gdot = nep.gamma(T, z)
        triple = linalg.min_singular_triple(T.evaluate(z))
        u, v = triple.u, triple.v
        delta = (-triple.sigma / g ** 2) * gdot
        c = np.vdot(u, T.evaluate(z, order=1) @ v) + delta
        u = -_unit_phase(c, z) * u
        self._record(triple.sigma, -abs(c))
        return Perturbation.rank_one(u, v, nep.block_coefficients(T, z, g))

    def next_point(self, direction: Perturbation, z_prev: complex) -> complex:
        return self.rightmost_of(self.T.perturbed(direction, self.cfg.eps), z_prev)


class FpNepConst(FpNep):
    """Constant perturbations of the last coefficient only."""

    name = "fp-nep-const"

    def __init__(self, T: MatrixFunction, cfg: FixedPointConfig):
        super().__init__(T, cfg)
        w = T.weights
        if not T.functions[-1].is_one or any(w[:-1]) or w[-1] != 1:
            raise InputError(
                "Constant perturbations need t_κ ≡ 1 and weights (0, ..., 0, 1); "
                f"got last term {T.functions[-1].kind} and weights {w}"
            )
        self._coeffs = np.zeros(T.kappa)
        self._coeffs[-1] = 1.0

    def direction_at(self, z: complex) -> Perturbation:
        triple = linalg.min_singular_triple(self.T.evaluate(z))
        u, v = triple.u, triple.v
        c = np.vdot(u, self.T.evaluate(z, order=1) @ v)
        u = -_unit_phase(c, z) * u
        self._record(triple.sigma, -abs(c))
        return Perturbation.rank_one(u, v, self._coeffs)


class FpNepScaled(NepFixedPoint):
    """Constant perturbations of the scaled function T(λ)/g(λ)."""

    name = "fp-nep-scaled"

    def direction_at(self, z: complex) -> np.ndarray:
        triple = linalg.min_singular_triple(self.T.evaluate(z))
        u, v = triple.u, triple.v
        _, md = nep.scaled_value_and_md(self.T, z, u, v)
        u = -_unit_phase(md, z) * u
        self._record(triple.sigma, -abs(md))
        return np.outer(u, v.conj())

    def next_point(self, direction: np.ndarray, z_prev: complex) -> complex:
        """Rightmost λ with det(T(λ)/g(λ) + εΔ) = 0, by freezing s = g(λ) and updating it."""
        eps = self.cfg.eps
        tol = self.cfg.effective_inner_tol
        s, _ = nep.gamma(self.T, z_prev)
        z = z_prev
        for _ in range(self.cfg.inner_max):
            z = self.rightmost_of(self.T.with_constant_shift((eps * s) * direction), z)
            s_new, _ = nep.gamma(self.T, z)
            if abs(s_new - s) < tol * s:
                return z
            s = s_new
        raise KernelError(
            f"Scaled eigenproblem did not settle in {self.cfg.inner_max} inner steps near z={z:.6g}"
        )


class FpMatrix(BaseFixedPoint):
    """Unstructured perturbations of a matrix A, ‖Δ‖₂ ≤ 1."""

    name = "fp-matrix"
    default_termination = "relative_real"

    def __init__(self, A, cfg: FixedPointConfig):
        super().__init__(cfg)
        self.A = linalg.as_matrix(A)
        self._T = MatrixFunction.from_matrix(self.A)

    @property
    def function(self) -> MatrixFunction:
        return self._T

    def initial_point(self) -> complex:
        strategy = self.cfg.init or "hybrid"
        if strategy not in ("first", "second", "hybrid"):
            raise InputError(f"Initialization '{strategy}' is not available for {self.name}. "
                             "Available: first, second, hybrid")
        z0, _ = init_point_matrix(self.A, self.cfg.eps, strategy)
        return z0

    def direction_at(self, z: complex) -> Tuple[np.ndarray, np.ndarray]:
        triple = linalg.min_singular_triple(self._T.evaluate(z))
        u, v = triple.u, triple.v
        c = np.vdot(u, v)
        u = _unit_phase(c, z) * u
        self._record(triple.sigma, abs(c))
        return u, v

    def next_point(self, direction: Tuple[np.ndarray, np.ndarray], z_prev: complex) -> complex:
        u, v = direction
        values = linalg.eigvals(self.A + self.cfg.eps * np.outer(u, v.conj()))
        return linalg.rightmost_value(values, self.cfg.tie_rule)


def fp_nep(T: MatrixFunction, cfg: FixedPointConfig, z0: Optional[complex] = None) -> PsaResult:
    return FpNep(T, cfg).run(z0)


def fp_nep_const(T: MatrixFunction, cfg: FixedPointConfig, z0: Optional[complex] = None) -> PsaResult:
    return FpNepConst(T, cfg).run(z0)


def fp_nep_scaled(T: MatrixFunction, cfg: FixedPointConfig, z0: Optional[complex] = None) -> PsaResult:
    return FpNepScaled(T, cfg).run(z0)


def fp_matrix(A, cfg: FixedPointConfig, z0: Optional[complex] = None) -> PsaResult:
    return FpMatrix(A, cfg).run(z0)
