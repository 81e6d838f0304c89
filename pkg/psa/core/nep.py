# psa/core/nep.py
"""Backward error, sensitivity and boundary diagnostics for matrix-valued functions.

All quantities refer to weighted block perturbations of T(λ) = Σ t_j(λ) T_j
measured in the stacked-block 2-norm. The weight function

    g(z) = sqrt(Σ_j w_j² |t_j(z)|²)

normalizes everything: the backward error is φ(z) = σ_min(T(z)) / g(z) and
z lies in the ε-pseudospectrum iff φ(z) <= ε.
"""
import logging
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple

import numpy as np

from ..config import Config
from ..errors import DegenerateError, InputError
from . import linalg
from .linalg import SingularTriple
from .matrix_function import MatrixFunction, Perturbation

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    RBVT = "rbvt"
    INTERIOR = "interior"
    EXTERIOR = "exterior"
    DEGENERATE = "degenerate"
    NOT_VERTICAL = "not_vertical"


@dataclass(frozen=True)
class BackwardError:
    phi: float
    triple: SingularTriple
    minimal: Perturbation


@dataclass(frozen=True)
class OptimalDirection:
    direction: Perturbation
    rate: float
    x: np.ndarray
    y: np.ndarray


@dataclass(frozen=True)
class RbvtReport:
    sigma_scaled: float
    boundary_residual: float
    s_value: Optional[complex]
    sigma_gap: float
    verdict: Verdict

    @property
    def is_rbvt(self) -> bool:
        return self.verdict == Verdict.RBVT


def evaluate(T: MatrixFunction, z: complex, order: int = 0) -> np.ndarray:
    return T.evaluate(z, order)


def gamma(T: MatrixFunction, z: complex) -> Tuple[float, complex]:
    """(g, gdot) with gdot = Σ w_j² t_j'(z) conj(t_j(z)).

    Raises:
        DegenerateError: all weighted coefficient functions vanish at z
    """
    t, dt = T.scalar_values(z)
    w2 = np.asarray(T.weights) ** 2
    g = float(np.sqrt(np.sum(w2 * np.abs(t) ** 2)))
    if not g > 0 or not np.isfinite(g):
        raise DegenerateError(
            f"Weighted coefficient functions vanish at z={z:.6g} (g={g}); the perturbation set is empty there"
        )
    gdot = complex(np.sum(w2 * dt * np.conj(t)))
    return g, gdot


def block_coefficients(T: MatrixFunction, z: complex, g: Optional[float] = None) -> np.ndarray:
    """c_j = w_j conj(t_j(z)) / g(z), the per-block scalars of the optimal rank-one direction."""
    t, _ = T.scalar_values(z)
    if g is None:
        g, _ = gamma(T, z)
    return np.asarray(T.weights) * np.conj(t) / g


def perturbation_value(T: MatrixFunction, pert: Perturbation, z: complex) -> np.ndarray:
    """ΔT(z) = Σ_j t_j(z) w_j ΔT_j."""
    t, _ = T.scalar_values(z)
    out = np.zeros((T.n, T.n), dtype=complex)
    for j, w in enumerate(T.weights):
        if w and t[j] != 0:
            out += t[j] * w * pert.block(j)
    return out


def backward_error(T: MatrixFunction, z: complex) -> BackwardError:
    """Backward error φ(z) and the minimal perturbation making z an eigenvalue.

    The minimal perturbation has blocks −φ w_j conj(t_j(z)) u v* / g(z), with
    (σ, u, v) the smallest singular triple of T(z).
    """
    g, _ = gamma(T, z)
    triple = linalg.min_singular_triple(T.evaluate(z))
    phi = triple.sigma / g
    coeffs = -phi * block_coefficients(T, z, g)
    return BackwardError(phi=phi, triple=triple, minimal=Perturbation.rank_one(triple.u, triple.v, coeffs))


def backward_error_value(T: MatrixFunction, z: complex) -> float:
    g, _ = gamma(T, z)
    return linalg.singular_values(T.evaluate(z))[-1] / g


def membership(T: MatrixFunction, z: complex, eps: float) -> Tuple[bool, float]:
    """(inside, margin) with margin = eps − φ(z)."""
    margin = eps - backward_error_value(T, z)
    return margin >= 0, margin


def _sensitivity_denominator(T: MatrixFunction, mu0: complex, x: np.ndarray, y: np.ndarray) -> complex:
    dT = T.evaluate(mu0, order=1)
    d = complex(np.vdot(y, dT @ x))
    if abs(d) <= Config.SENSITIVITY_TOL * max(np.linalg.norm(dT, "fro"), np.finfo(float).tiny):
        raise DegenerateError(
            f"y*T'(μ)x vanishes at μ={mu0:.6g}; the eigenvalue is defective or nearly so"
        )
    return d


def eig_sensitivity(T: MatrixFunction, mu0: complex, x: np.ndarray, y: np.ndarray, direction: Perturbation) -> complex:
    """First-order eigenvalue motion μ' = −(y* ΔT(μ0) x) / (y* T'(μ0) x)."""
    d = _sensitivity_denominator(T, mu0, x, y)
    t, _ = T.scalar_values(mu0)
    num = sum(t[j] * w * direction.bilinear(j, y, x) for j, w in enumerate(T.weights) if w)
    return complex(-num / d)


def optimal_direction(T: MatrixFunction, mu0: complex, x: np.ndarray, y: np.ndarray) -> OptimalDirection:
    """Unit perturbation pushing μ0 furthest to the right, with its rate g/|y*T'x|.

    x is re-phased so that y* T'(μ0) x is real and negative.
    """
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    d = _sensitivity_denominator(T, mu0, x, y)
    x = x * (-np.conj(d) / abs(d))
    g, _ = gamma(T, mu0)
    direction = Perturbation.rank_one(y, x, block_coefficients(T, mu0, g))
    return OptimalDirection(direction=direction, rate=g / abs(d), x=x, y=y)


def scaled_value_and_md(T: MatrixFunction, z: complex, u: Optional[np.ndarray] = None,
                        v: Optional[np.ndarray] = None) -> Tuple[float, complex]:
    """(σ_min(T(z))/g, u* M^D(z) v) with M^D = (T' − T·gdot/g²)/g.

    Without explicit (u, v) the smallest singular pair of T(z) is used.
    """
    g, gdot = gamma(T, z)
    Tz = T.evaluate(z)
    triple = linalg.min_singular_triple(Tz)
    if u is None or v is None:
        u, v = triple.u, triple.v
    dT = T.evaluate(z, order=1)
    a = np.vdot(u, dT @ v)
    b = np.vdot(u, Tz @ v)
    return triple.sigma / g, complex((a - b * gdot / g ** 2) / g)


def scaled_partials(T: MatrixFunction, z: complex) -> Tuple[np.ndarray, np.ndarray]:
    """Partial derivatives of M(x + iy) = T/g with respect to x and y."""
    g, gdot = gamma(T, z)
    Tz = T.evaluate(z)
    dT = T.evaluate(z, order=1)
    m_s1 = (dT - Tz * (gdot.real / g ** 2)) / g
    m_s2 = (1j * dT + Tz * (gdot.imag / g ** 2)) / g
    return m_s1, m_s2


def s_map(T: MatrixFunction, z: complex, gap_tol: float = None) -> complex:
    """S(z) = Re{u* M_s1 v} − i Re{u* M_s2 v}.

    Raises:
        DegenerateError: σ_min(T(z)) is not simple
    """
    gap_tol = Config.SIMPLICITY_GAP_TOL if gap_tol is None else gap_tol
    triple = linalg.min_singular_triple(T.evaluate(z))
    if not triple.is_simple(gap_tol):
        raise DegenerateError(
            f"Smallest singular value of T({z:.6g}) is not simple (relative gap {triple.relative_gap:.2e})"
        )
    m_s1, m_s2 = scaled_partials(T, z)
    u, v = triple.u, triple.v
    return complex(np.vdot(u, m_s1 @ v).real - 1j * np.vdot(u, m_s2 @ v).real)


def rbvt_check(T: MatrixFunction, z: complex, eps: float, tol_b: float = None, tol_s: float = None,
               tol_g: float = None) -> RbvtReport:
    """Classify z as a right-boundary point with vertical tangent (rbvt), or say why not."""
    if eps < 0:
        raise InputError(f"eps must be nonnegative, got {eps}")
    tol_b = Config.RBVT_TOL_B_FACTOR * max(1.0, eps) if tol_b is None else tol_b
    tol_s = Config.RBVT_TOL_S if tol_s is None else tol_s
    tol_g = Config.SIMPLICITY_GAP_TOL if tol_g is None else tol_g

    g, _ = gamma(T, z)
    triple = linalg.min_singular_triple(T.evaluate(z))
    sigma_scaled = triple.sigma / g
    residual = abs(sigma_scaled - eps)

    if residual > tol_b:
        verdict = Verdict.INTERIOR if sigma_scaled < eps else Verdict.EXTERIOR
        return RbvtReport(sigma_scaled, residual, None, triple.gap, verdict)
    if not triple.is_simple(tol_g):
        return RbvtReport(sigma_scaled, residual, None, triple.gap, Verdict.DEGENERATE)

    s = s_map(T, z, gap_tol=tol_g)
    if s == 0:
        verdict = Verdict.DEGENERATE
    elif abs(s.imag) <= tol_s * abs(s) and s.real > 0:
        verdict = Verdict.RBVT
    else:
        verdict = Verdict.NOT_VERTICAL
    return RbvtReport(sigma_scaled, residual, s, triple.gap, verdict)
