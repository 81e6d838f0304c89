# psa/core/matrix_function.py
"""Matrix-valued functions T(λ) = Σ_j t_j(λ) T_j with perturbation weights w_j."""
import logging
import warnings
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg

from ..errors import InputError, KernelError
from . import linalg

logger = logging.getLogger(__name__)

FD_STEP = 1e-6
FD_RTOL = 1e-6


@dataclass(frozen=True)
class ScalarFunction:
    """Holomorphic scalar coefficient function with its derivative.

    Built-in kinds are `monomial` (coef·λ^k) and `exponential` (coef·e^{τλ});
    `user` wraps an arbitrary (f, f') pair.
    """

    kind: str
    param: complex = 0.0
    coef: complex = 1.0
    func: Optional[Callable] = field(default=None, compare=False, repr=False)
    dfunc: Optional[Callable] = field(default=None, compare=False, repr=False)

    @classmethod
    def monomial(cls, power: int, coef: complex = 1.0) -> "ScalarFunction":
        if int(power) != power or power < 0:
            raise InputError(f"Monomial power must be a nonnegative integer, got {power}")
        return cls(kind="monomial", param=int(power), coef=coef)

    @classmethod
    def constant(cls, value: complex = 1.0) -> "ScalarFunction":
        return cls.monomial(0, coef=value)

    @classmethod
    def exponential(cls, rate: complex, coef: complex = 1.0) -> "ScalarFunction":
        return cls(kind="exponential", param=rate, coef=coef)

    @classmethod
    def user(cls, func: Callable, dfunc: Callable, check: bool = True, probes: int = 5, seed: int = 0) -> "ScalarFunction":
        """Wrap a user-supplied pair, optionally checking f' against central differences."""
        t = cls(kind="user", func=func, dfunc=dfunc)
        if check:
            t.check_derivative(probes=probes, seed=seed)
        return t

    @property
    def power(self) -> Optional[int]:
        return int(self.param) if self.kind == "monomial" else None

    @property
    def is_monomial(self) -> bool:
        return self.kind == "monomial"

    @property
    def is_one(self) -> bool:
        """True when t ≡ 1."""
        if self.kind == "monomial":
            return self.param == 0 and self.coef == 1
        if self.kind == "exponential":
            return self.param == 0 and self.coef == 1
        return False

    def __call__(self, z):
        if self.kind == "monomial":
            return self.coef * np.power(z, self.param) if self.param else self.coef * np.ones_like(z, dtype=complex)
        if self.kind == "exponential":
            return self.coef * np.exp(self.param * np.asarray(z, dtype=complex))
        return _vectorized(self.func, z)

    def deriv(self, z):
        if self.kind == "monomial":
            k = self.param
            if k == 0:
                return np.zeros_like(z, dtype=complex)
            return self.coef * k * np.power(z, k - 1) if k > 1 else self.coef * np.ones_like(z, dtype=complex)
        if self.kind == "exponential":
            return self.coef * self.param * np.exp(self.param * np.asarray(z, dtype=complex))
        return _vectorized(self.dfunc, z)

    def check_derivative(self, probes: int = 5, seed: int = 0, h: float = FD_STEP):
        """Compare deriv against central differences at random points.

        Raises:
            InputError: derivative inconsistent with the function
        """
        rng = np.random.default_rng(seed)
        for z in rng.standard_normal(probes) + 1j * rng.standard_normal(probes):
            fd = (complex(self(z + h)) - complex(self(z - h))) / (2 * h)
            d = complex(self.deriv(z))
            if abs(fd - d) > FD_RTOL * max(1.0, abs(d)):
                raise InputError(f"Derivative of {self.kind} function inconsistent at z={z:.4g}: {d} vs {fd}")


def _vectorized(func: Callable, z):
    if np.ndim(z) == 0:
        return complex(func(complex(z)))
    try:
        out = np.asarray(func(z), dtype=complex)
        if out.shape == np.shape(z):
            return out
    except (TypeError, ValueError):
        pass
    return np.vectorize(lambda s: complex(func(s)), otypes=[complex])(z)


@dataclass(frozen=True)
class Perturbation:
    """Block perturbation (ΔT_1, ..., ΔT_κ).

    Stored densely or in rank-one form ΔT_j = coeffs[j] · u v*.
    """

    blocks: Optional[Tuple[np.ndarray, ...]] = None
    u: Optional[np.ndarray] = None
    v: Optional[np.ndarray] = None
    coeffs: Optional[np.ndarray] = None

    @classmethod
    def dense(cls, blocks: Sequence) -> "Perturbation":
        mats = tuple(linalg.as_matrix(B, name="perturbation block").astype(complex) for B in blocks)
        if not mats:
            raise InputError("Perturbation needs at least one block")
        if any(B.shape != mats[0].shape for B in mats):
            raise InputError("Perturbation blocks must share one shape")
        return cls(blocks=mats)

    @classmethod
    def rank_one(cls, u, v, coeffs) -> "Perturbation":
        return cls(
            u=np.asarray(u, dtype=complex).ravel(),
            v=np.asarray(v, dtype=complex).ravel(),
            coeffs=np.asarray(coeffs, dtype=complex).ravel(),
        )

    @property
    def is_rank_one(self) -> bool:
        return self.blocks is None

    @property
    def kappa(self) -> int:
        return self.coeffs.size if self.is_rank_one else len(self.blocks)

    @property
    def norm(self) -> float:
        """Stacked-block 2-norm ||[ΔT_1 ... ΔT_κ]||_2."""
        if self.is_rank_one:
            return float(np.linalg.norm(self.u) * np.linalg.norm(self.v) * np.linalg.norm(self.coeffs))
        return float(np.linalg.norm(np.hstack(self.blocks), 2))

    def block(self, j: int) -> np.ndarray:
        if self.is_rank_one:
            return self.coeffs[j] * np.outer(self.u, self.v.conj())
        return self.blocks[j]

    def bilinear(self, j: int, y: np.ndarray, x: np.ndarray) -> complex:
        """y* ΔT_j x."""
        if self.is_rank_one:
            return complex(self.coeffs[j] * np.vdot(y, self.u) * np.vdot(self.v, x))
        return complex(np.vdot(y, self.blocks[j] @ x))

    def scaled(self, s: complex) -> "Perturbation":
        if self.is_rank_one:
            return replace(self, coeffs=self.coeffs * s)
        return Perturbation(blocks=tuple(s * B for B in self.blocks))


@dataclass(frozen=True)
class MatrixFunction:
    """T(λ) = Σ_j t_j(λ) T_j with nonnegative perturbation weights w_j.

    Immutable after construction; safe to share across threads. Functions
    that are not polynomial in λ must carry `eigenvalue_seeds` so their
    spectrum can be located by Newton refinement.
    """

    functions: Tuple[ScalarFunction, ...]
    matrices: Tuple[np.ndarray, ...]
    weights: Tuple[float, ...]
    eigenvalue_seeds: Tuple[complex, ...] = ()
    name: str = "T"

    def __post_init__(self):
        if not self.functions or len(self.functions) != len(self.matrices):
            raise InputError("MatrixFunction needs one matrix per scalar function")
        if len(self.weights) != len(self.functions):
            raise InputError(
                f"Expected {len(self.functions)} weights, got {len(self.weights)}"
            )
        if any((not np.isfinite(w)) or w < 0 for w in self.weights):
            raise InputError(f"Weights must be finite and nonnegative, got {self.weights}")
        n = self.matrices[0].shape[0]
        for j, T in enumerate(self.matrices):
            if T.ndim != 2 or T.shape != (n, n):
                raise InputError(f"T_{j + 1} has shape {T.shape}, expected ({n}, {n})")

    @classmethod
    def from_terms(cls, terms: Sequence[Tuple[ScalarFunction, object]], weights: Sequence[float],
                   eigenvalue_seeds: Sequence[complex] = (), name: str = "T") -> "MatrixFunction":
        funcs = tuple(t for t, _ in terms)
        mats = tuple(linalg.as_matrix(T, name=f"T_{j + 1}") for j, (_, T) in enumerate(terms))
        return cls(
            functions=funcs,
            matrices=mats,
            weights=tuple(float(w) for w in weights),
            eigenvalue_seeds=tuple(complex(s) for s in eigenvalue_seeds),
            name=name,
        )

    @classmethod
    def from_matrix(cls, A, name: str = "A") -> "MatrixFunction":
        """T(λ) = λI − A with only the constant block perturbed (w = (0, 1))."""
        A = linalg.as_matrix(A)
        terms = [
            (ScalarFunction.monomial(1), np.eye(A.shape[0])),
            (ScalarFunction.constant(-1.0), A),
        ]
        return cls.from_terms(terms, weights=(0.0, 1.0), name=name)

    @classmethod
    def polynomial(cls, coeffs: Sequence, weights: Optional[Sequence[float]] = None, name: str = "P") -> "MatrixFunction":
        """P(λ) = Σ_k λ^k P_k, terms ordered from the highest power down."""
        if len(coeffs) < 2:
            raise InputError("Polynomial needs degree >= 1")
        d = len(coeffs) - 1
        terms = [(ScalarFunction.monomial(k), coeffs[k]) for k in range(d, -1, -1)]
        weights = (1.0,) * (d + 1) if weights is None else weights
        return cls.from_terms(terms, weights=weights, name=name)

    @classmethod
    def quadratic(cls, M, C, K, weights: Sequence[float] = (1.0, 1.0, 1.0), name: str = "P") -> "MatrixFunction":
        """λ²M + λC + K with weights (w_m, w_c, w_k)."""
        return cls.polynomial([K, C, M], weights=weights, name=name)

    @classmethod
    def delay(cls, A0, A1, tau: float = 1.0, weights: Sequence[float] = (0.0, 0.0, 1.0),
              eigenvalue_seeds: Optional[Sequence[complex]] = None, name: str = "delay") -> "MatrixFunction":
        """λI − A1·e^{−τλ} − A0, constant block last so that only A0 may be perturbed.

        Seeds default to the eigenvalues of A0 and of A0 + A1.
        """
        A0 = linalg.as_matrix(A0, name="A0")
        A1 = linalg.as_matrix(A1, name="A1")
        if eigenvalue_seeds is None:
            eigenvalue_seeds = np.concatenate([linalg.eigvals(A0), linalg.eigvals(A0 + A1)])
        terms = [
            (ScalarFunction.monomial(1), np.eye(A0.shape[0])),
            (ScalarFunction.exponential(-tau, coef=-1.0), A1),
            (ScalarFunction.constant(1.0), -A0),
        ]
        return cls.from_terms(terms, weights=weights, eigenvalue_seeds=eigenvalue_seeds, name=name)

    @property
    def n(self) -> int:
        return self.matrices[0].shape[0]

    @property
    def kappa(self) -> int:
        return len(self.functions)

    @property
    def is_polynomial(self) -> bool:
        return all(t.is_monomial for t in self.functions)

    @property
    def degree(self) -> int:
        if not self.is_polynomial:
            raise InputError(f"{self.name} is not polynomial in λ")
        return max(t.power for t in self.functions)

    @property
    def is_matrix_case(self) -> bool:
        """λI − A form with only the constant block weighted."""
        return (
            self.kappa == 2
            and self.is_polynomial
            and self.functions[0].power == 1 and self.functions[0].coef == 1
            and self.functions[1].power == 0 and self.functions[1].coef == -1
            and np.array_equal(self.matrices[0], np.eye(self.n))
            and self.weights == (0.0, 1.0)
        )

    def scalar_values(self, z: complex) -> Tuple[np.ndarray, np.ndarray]:
        """(t_j(z), t_j'(z)) for all j."""
        t = np.array([complex(f(z)) for f in self.functions])
        dt = np.array([complex(f.deriv(z)) for f in self.functions])
        return t, dt

    def evaluate(self, z: complex, order: int = 0) -> np.ndarray:
        """Σ t_j(z) T_j (order 0) or Σ t_j'(z) T_j (order 1).

        Raises:
            InputError: non-finite z or unsupported order
        """
        if not np.isfinite(z):
            raise InputError(f"Cannot evaluate {self.name} at non-finite z={z}")
        if order not in (0, 1):
            raise InputError(f"Derivative order must be 0 or 1, got {order}")
        scal = [complex(f(z)) if order == 0 else complex(f.deriv(z)) for f in self.functions]
        out = np.zeros((self.n, self.n), dtype=complex)
        for s, T in zip(scal, self.matrices):
            if s != 0:
                out += s * T
        if not np.all(np.isfinite(out)):
            raise InputError(f"{self.name}({z}) overflowed")
        return out

    def evaluate_batch(self, zs: np.ndarray) -> np.ndarray:
        """T(z) for a 1-D array of points, shape (len(zs), n, n)."""
        zs = np.asarray(zs, dtype=complex).ravel()
        out = np.zeros((zs.size, self.n, self.n), dtype=complex)
        for f, T in zip(self.functions, self.matrices):
            out += np.asarray(f(zs), dtype=complex)[:, None, None] * T
        return out

    def weighted_moduli(self, zs) -> np.ndarray:
        """g(z) = sqrt(Σ w_j² |t_j(z)|²) for an array of points."""
        zs = np.asarray(zs, dtype=complex)
        acc = np.zeros(zs.shape)
        for f, w in zip(self.functions, self.weights):
            if w:
                acc += (w * np.abs(np.asarray(f(zs), dtype=complex))) ** 2
        return np.sqrt(acc)

    def coefficients(self) -> List[np.ndarray]:
        """Monomial coefficients P_0, ..., P_d of a polynomial function."""
        d = self.degree
        coeffs = [np.zeros((self.n, self.n), dtype=complex) for _ in range(d + 1)]
        for f, T in zip(self.functions, self.matrices):
            coeffs[f.power] = coeffs[f.power] + f.coef * T
        return coeffs

    def perturbed(self, pert: Perturbation, scale: float = 1.0) -> "MatrixFunction":
        """T + scale·ΔT, where ΔT(λ) = Σ_j t_j(λ) w_j ΔT_j."""
        if pert.kappa != self.kappa:
            raise InputError(f"Perturbation has {pert.kappa} blocks, {self.name} has {self.kappa} terms")
        mats = tuple(
            T + (scale * w) * pert.block(j) if w else T
            for j, (T, w) in enumerate(zip(self.matrices, self.weights))
        )
        return replace(self, matrices=mats)

    def with_constant_shift(self, E: np.ndarray) -> "MatrixFunction":
        """T(λ) + E as a new function; E enters as an unweighted constant term."""
        return replace(
            self,
            functions=self.functions + (ScalarFunction.constant(1.0),),
            matrices=self.matrices + (np.asarray(E, dtype=complex),),
            weights=self.weights + (0.0,),
        )

    def with_weights(self, weights: Sequence[float]) -> "MatrixFunction":
        return replace(self, weights=tuple(float(w) for w in weights))

    def eigenvalues(self, extra_seeds: Sequence[complex] = ()) -> np.ndarray:
        """Finite eigenvalues of T.

        Polynomial functions use the block companion form; other functions
        refine their seeds (plus `extra_seeds`) by Newton's method on det T.
        """
        if self.is_polynomial:
            return linalg.poly_eig(self.coefficients())
        seeds = list(self.eigenvalue_seeds) + [complex(s) for s in extra_seeds]
        if not seeds:
            raise InputError(
                f"{self.name} is not polynomial; supply eigenvalue seeds to locate its spectrum"
            )
        found: List[complex] = []
        for s in seeds:
            try:
                z = newton_eigenvalue(self, s)
            except KernelError as e:
                logger.debug(f"Seed {s:.6g} discarded: {e}")
                continue
            if all(abs(z - f) > 1e-8 * max(1.0, abs(z)) for f in found):
                found.append(z)
        if not found:
            raise KernelError(f"Newton refinement failed from every seed of {self.name}")
        return np.array(found, dtype=complex)


def newton_eigenvalue(T: MatrixFunction, z0: complex, tol: float = 1e-13, max_iter: int = 50) -> complex:
    """Newton's method on det T(λ): λ ← λ − 1/trace(T(λ)⁻¹ T'(λ)).

    Raises:
        KernelError: no convergence within max_iter
    """
    z = complex(z0)
    for _ in range(max_iter):
        Tz = T.evaluate(z)
        dT = T.evaluate(z, order=1)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
            try:
                tr = np.trace(scipy.linalg.solve(Tz, dT, check_finite=False))
            except scipy.linalg.LinAlgError:
                return z  # T(z) exactly singular
        if not np.isfinite(tr) or tr == 0:
            raise KernelError(f"Newton step undefined at z={z:.6g}")
        step = 1.0 / tr
        z = z - step
        if abs(step) <= tol * max(1.0, abs(z)):
            return z
    raise KernelError(f"Newton refinement from {z0:.6g} did not converge in {max_iter} steps")


def describe(T: MatrixFunction) -> Dict[str, object]:
    """Short summary used in logs and run records."""
    return {
        "name": T.name,
        "n": T.n,
        "terms": [f"{f.kind}({f.param})" for f in T.functions],
        "weights": list(T.weights),
    }
