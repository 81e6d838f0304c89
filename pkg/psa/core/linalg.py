# psa/core/linalg.py
"""Dense complex linear-algebra kernels.

Full eigendecompositions with matching left/right eigenvectors, smallest
singular triples, polynomial eigenvalues through the block companion form,
and Hermitian positive definite square roots. Every routine is a pure
function of its inputs; eigenvector phases are left free here and fixed by
the callers.
"""
import logging
import warnings
from dataclasses import dataclass
from typing import Literal, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
import scipy.linalg

from ..errors import InputError, KernelError

logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complexfloating]
TieRule = Literal["largest_imag", "smallest_imag"]

TIE_RTOL = 1e-12
HERMITIAN_RTOL = 1e-12


@dataclass(frozen=True)
class EigenSystem:
    """Eigenvalues with unit right (columns of `right`) and left (columns of `left`) eigenvectors."""

    values: np.ndarray
    right: np.ndarray
    left: np.ndarray

    def __len__(self) -> int:
        return self.values.size

    def triple(self, i: int) -> Tuple[complex, np.ndarray, np.ndarray]:
        return complex(self.values[i]), self.right[:, i], self.left[:, i]


@dataclass(frozen=True)
class SingularTriple:
    """Smallest singular value with consistent unit vectors: A v = sigma u, A* u = sigma v."""

    sigma: float
    u: np.ndarray
    v: np.ndarray
    next_sigma: float = np.inf

    @property
    def gap(self) -> float:
        return self.next_sigma - self.sigma

    @property
    def relative_gap(self) -> float:
        if np.isinf(self.next_sigma):
            return np.inf
        return self.gap / max(self.next_sigma, 1e-300)

    def is_simple(self, tol: float) -> bool:
        return self.relative_gap >= tol


def as_matrix(A, name: str = "A", square: bool = True) -> np.ndarray:
    """Validate and convert to a 2-D float or complex array.

    Raises:
        InputError: wrong dimensionality, non-square when required, or non-finite entries
    """
    dtype = np.complex128 if np.iscomplexobj(A) else np.float64
    try:
        M = np.array(A, dtype=dtype)
    except (TypeError, ValueError) as e:
        raise InputError(f"{name} is not a numeric matrix: {e}") from e
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] < 1 or M.shape[1] < 1:
        raise InputError(f"{name} must be a non-empty 2-D matrix, got shape {M.shape}")
    if square and M.shape[0] != M.shape[1]:
        raise InputError(f"{name} must be square, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InputError(f"{name} has non-finite entries")
    return M


def eig_full(A) -> EigenSystem:
    """Eigenvalues of A with left and right eigenvectors from one decomposition.

    Raises:
        InputError: A not square or not finite
        KernelError: LAPACK failure
    """
    A = as_matrix(A)
    try:
        values, left, right = scipy.linalg.eig(A, left=True, right=True)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise KernelError(f"Eigendecomposition failed: {e}") from e
    if not np.all(np.isfinite(values)):
        raise KernelError("Eigendecomposition returned non-finite eigenvalues")

    right = right / np.linalg.norm(right, axis=0)
    left = left / np.linalg.norm(left, axis=0)
    return EigenSystem(values=values.astype(complex), right=right.astype(complex), left=left.astype(complex))


def eigvals(A) -> np.ndarray:
    """Eigenvalues only."""
    A = as_matrix(A)
    try:
        values = scipy.linalg.eigvals(A, check_finite=False)
    except (scipy.linalg.LinAlgError, ValueError) as e:
        raise KernelError(f"Eigenvalue computation failed: {e}") from e
    if not np.all(np.isfinite(values)):
        raise KernelError("Eigenvalue computation returned non-finite values")
    return values.astype(complex)


def _svd(A: np.ndarray):
    try:
        return scipy.linalg.svd(A, lapack_driver="gesdd", check_finite=False)
    except scipy.linalg.LinAlgError:
        logger.debug("gesdd did not converge, retrying with gesvd")
    try:
        return scipy.linalg.svd(A, lapack_driver="gesvd", check_finite=False)
    except scipy.linalg.LinAlgError as e:
        raise KernelError(f"Singular value decomposition failed: {e}") from e


def min_singular_triple(A) -> SingularTriple:
    """Smallest singular value of A with consistent unit singular vectors."""
    A = as_matrix(A, square=False)
    U, s, Vh = _svd(A)
    k = s.size - 1
    next_sigma = float(s[k - 1]) if k > 0 else np.inf
    return SingularTriple(
        sigma=float(s[k]),
        u=U[:, k].astype(complex),
        v=Vh[k].conj().astype(complex),
        next_sigma=next_sigma,
    )


def singular_values(A) -> np.ndarray:
    """All singular values in descending order."""
    A = as_matrix(A, square=False)
    try:
        return scipy.linalg.svdvals(A, check_finite=False)
    except scipy.linalg.LinAlgError as e:
        raise KernelError(f"Singular value computation failed: {e}") from e


def poly_eig(coeffs: Sequence, vectors: bool = False):
    """Eigenvalues of P(λ) = Σ_k λ^k P_k through the block companion form.

    Args:
        coeffs: P_0, ..., P_d with d >= 1; P_d must be invertible
        vectors: also return unit right eigenvectors (columns)

    Returns:
        values, or (values, vectors) when requested

    Raises:
        InputError: fewer than two coefficients or mismatched sizes
        KernelError: singular leading coefficient or eigensolver failure
    """
    mats = [as_matrix(P, name=f"P_{k}") for k, P in enumerate(coeffs)]
    if len(mats) < 2:
        raise InputError("Polynomial eigenproblem needs degree >= 1")
    n = mats[0].shape[0]
    if any(P.shape != (n, n) for P in mats):
        raise InputError("Polynomial coefficients must share one square size")
    d = len(mats) - 1
    lead = mats[-1]

    if 1.0 / np.linalg.cond(lead, 1) < n * np.finfo(float).eps:
        raise KernelError(
            "Leading coefficient is singular; the companion form used here requires its inverse"
        )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        top = -scipy.linalg.solve(lead, np.hstack(mats[-2::-1]), check_finite=False)

    companion = np.zeros((d * n, d * n), dtype=np.result_type(top, float))
    companion[:n, :] = top
    if d > 1:
        companion[n:, :-n] = np.eye((d - 1) * n)

    if not vectors:
        return eigvals(companion)

    system = eig_full(companion)
    block = system.right[(d - 1) * n:, :]
    block = block / np.linalg.norm(block, axis=0)
    return system.values, block


def quad_eig(M, C, K, vectors: bool = False):
    """Eigenvalues of λ²M + λC + K (first companion linearization of size 2n)."""
    return poly_eig([K, C, M], vectors=vectors)


def spd_sqrt(S) -> np.ndarray:
    """Hermitian positive definite square root.

    Raises:
        InputError: S not Hermitian or not positive definite
    """
    S = as_matrix(S, name="S")
    scale = np.linalg.norm(S, "fro")
    if np.linalg.norm(S - S.conj().T, "fro") > HERMITIAN_RTOL * max(scale, 1.0):
        raise InputError("Square root requires a Hermitian matrix")
    try:
        w, V = scipy.linalg.eigh((S + S.conj().T) / 2)
    except scipy.linalg.LinAlgError as e:
        raise KernelError(f"Hermitian eigendecomposition failed: {e}") from e
    if w.min() <= 0:
        raise InputError(f"Square root requires a positive definite matrix (min eigenvalue {w.min():.3e})")

    R = (V * np.sqrt(w)) @ V.conj().T
    return (R + R.conj().T) / 2


def rightmost(values, tie_rule: TieRule = "largest_imag") -> int:
    """Index of the eigenvalue with largest real part.

    Ties within 1e-12 (relative, floored at 1) are broken by the imaginary part.
    """
    vals = np.asarray(values, dtype=complex).ravel()
    if vals.size == 0:
        raise InputError("rightmost() of an empty set")
    finite = np.isfinite(vals)
    if not finite.any():
        raise InputError("rightmost() found no finite values")
    re = np.where(finite, vals.real, -np.inf)
    top = re.max()
    candidates = np.flatnonzero(re >= top - TIE_RTOL * max(abs(top), 1.0))
    imag = vals.imag[candidates]
    pick = np.argmax(imag) if tie_rule == "largest_imag" else np.argmin(imag)
    return int(candidates[pick])


def rightmost_value(values, tie_rule: TieRule = "largest_imag") -> complex:
    vals = np.asarray(values, dtype=complex).ravel()
    return complex(vals[rightmost(vals, tie_rule)])


def closest(values, target: complex) -> int:
    """Index of the value nearest to target."""
    vals = np.asarray(values, dtype=complex).ravel()
    if vals.size == 0:
        raise InputError("closest() of an empty set")
    return int(np.argmin(np.abs(vals - target)))


def align_phase(vec: np.ndarray, ref: Optional[np.ndarray] = None, inner: Optional[complex] = None) -> np.ndarray:
    """Rotate vec by a unit scalar.

    With `ref`, the result r satisfies ref* r real nonnegative. With `inner`
    (a precomputed w* vec for some w), the result satisfies w* r = |inner|.
    """
    c = np.vdot(ref, vec) if ref is not None else inner
    if c is None or abs(c) == 0:
        return vec
    return vec * (np.conj(c) / abs(c))
