# psa/problems/generators.py
"""Built-in test problems: the damped mass-spring chain, grcar, kahan and seeded random matrices."""
import logging
from typing import List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator

from ..core import linalg
from ..core.matrix_function import MatrixFunction
from ..errors import InputError

logger = logging.getLogger(__name__)

KAHAN_LAST_DIAGONAL = 0.1


class DampingSpec(BaseModel):
    """Mass-spring chain with internal damping and external dampers.

    M = diag(1..n), K = tridiag(−k, 2k, −k) and
    C = 2ξ M^{1/2} (M^{−1/2} K M^{−1/2})^{1/2} M^{1/2} + Σ ν_i e_{idx_i} e_{idx_i}ᵀ.
    """

    n: int = Field(default=20, ge=2)
    xi: float = Field(default=0.005, ge=0)
    k: float = Field(default=25.0, gt=0)
    dampers: List[Tuple[int, float]] = Field(default_factory=list)
    weights: Tuple[float, float, float] = (1.0, 1.0, 1.0)

    @field_validator("weights")
    @classmethod
    def _nonnegative_weights(cls, w):
        if any(x < 0 for x in w):
            raise ValueError(f"weights must be nonnegative, got {w}")
        return w

    @model_validator(mode="after")
    def _check_dampers(self):
        for idx, nu in self.dampers:
            if not 1 <= idx <= self.n:
                raise ValueError(f"damper index {idx} outside 1..{self.n}")
            if nu < 0:
                raise ValueError(f"damper viscosity must be nonnegative, got {nu}")
        return self


def gen_damping(spec: DampingSpec) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(M, C, K) of the damped chain, all real symmetric."""
    n, k = spec.n, spec.k
    masses = np.arange(1, n + 1, dtype=float)
    M = np.diag(masses)
    K = 2 * k * np.eye(n) - k * (np.eye(n, k=1) + np.eye(n, k=-1))

    m_half = np.sqrt(masses)
    scaled = K / np.outer(m_half, m_half)
    C = 2 * spec.xi * np.outer(m_half, m_half) * linalg.spd_sqrt(scaled).real
    C = (C + C.T) / 2
    for idx, nu in spec.dampers:
        C[idx - 1, idx - 1] += nu
    return M, C, K


def damping_function(spec: DampingSpec) -> MatrixFunction:
    M, C, K = gen_damping(spec)
    return MatrixFunction.quadratic(M, C, K, weights=spec.weights, name=f"damping{spec.n}")


def grcar(n: int) -> np.ndarray:
    """Toeplitz matrix with −1 on the subdiagonal and 1 on the diagonal and three superdiagonals."""
    _check_size(n)
    A = -np.eye(n, k=-1)
    for j in range(4):
        A += np.eye(n, k=j)
    return A


def kahan(n: int, theta: Optional[float] = None) -> np.ndarray:
    """Upper triangular diag(s^0, ..., s^{n−1})·(I − c·strict upper ones), s = sin θ, c = cos θ.

    Without θ, s is chosen so that the last diagonal entry is 0.1.
    """
    _check_size(n)
    if theta is None:
        s = KAHAN_LAST_DIAGONAL ** (1.0 / (n - 1))
        c = np.sqrt(1.0 - s * s)
    else:
        s, c = np.sin(theta), np.cos(theta)
    U = np.eye(n) - c * np.triu(np.ones((n, n)), k=1)
    return s ** np.arange(n, dtype=float)[:, None] * U


def standard_normals(seed: int, size: int) -> np.ndarray:
    """Box–Muller normals from Philox uniforms; identical for a given seed on every platform."""
    rng = np.random.Generator(np.random.Philox(seed))
    pairs = (size + 1) // 2
    u1 = 1.0 - rng.random(pairs)
    u2 = rng.random(pairs)
    radius = np.sqrt(-2.0 * np.log(u1))
    angle = 2.0 * np.pi * u2
    return np.concatenate([radius * np.cos(angle), radius * np.sin(angle)])[:size]


def random_matrix(n: int, c1: float = 1.0, c2: float = 1.0, seed: int = 0) -> np.ndarray:
    """c1·G1 + i·c2·G2 with G1, G2 standard normal."""
    _check_size(n)
    g = standard_normals(seed, 2 * n * n)
    G1 = g[:n * n].reshape(n, n)
    G2 = g[n * n:].reshape(n, n)
    return c1 * G1 + 1j * c2 * G2


def _check_size(n: int):
    if int(n) != n or n < 2:
        raise InputError(f"Matrix size must be an integer >= 2, got {n}")


_NAMED = {
    "grcar": grcar,
    "kahan": kahan,
    "random": random_matrix,
}


def gen_named(name: str, n: int, **params) -> np.ndarray:
    """Named matrix family.

    Raises:
        InputError: unknown name or bad parameters
    """
    if name not in _NAMED:
        raise InputError(f"Unknown matrix family '{name}'. Available: {sorted(_NAMED)}")
    try:
        return _NAMED[name](int(n), **params)
    except TypeError as e:
        raise InputError(f"Bad parameters for {name}: {e}") from e
