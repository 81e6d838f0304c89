# psa/oracle/crisscross.py
"""Criss-cross computation of α_ε(A) for a matrix.

Vertical searches read the points of a line Re z = x where some singular
value of zI − A equals ε off the imaginary eigenvalues of a 2n×2n
structured matrix; horizontal searches apply the same test to −iA.
"""
import logging
from typing import List, Optional, Tuple

import numpy as np

from ..config import Config
from ..core import linalg
from ..errors import InputError, OracleError
from .grid import OracleResult

logger = logging.getLogger(__name__)

IMAG_RTOL = 1e-8
MAX_SWEEPS = 100


def vertical_crossings(A: np.ndarray, eps: float, x: float) -> np.ndarray:
    """Sorted y with σ_k((x + iy)I − A) = ε for some k."""
    n = A.shape[0]
    I = np.eye(n)
    B = A - x * I
    H = np.block([[B, -eps * I], [eps * I, -B.conj().T]])
    values = linalg.eigvals(H)
    threshold = IMAG_RTOL * max(np.linalg.norm(A, "fro"), 1.0)
    return np.sort(values[np.abs(values.real) <= threshold].imag)


def horizontal_crossings(A: np.ndarray, eps: float, y: float) -> np.ndarray:
    """Sorted x with σ_k((x + iy)I − A) = ε for some k."""
    return np.sort(-vertical_crossings(-1j * A, eps, y))


def _sigma_min(A: np.ndarray, z: complex) -> float:
    return float(linalg.singular_values(z * np.eye(A.shape[0]) - A)[-1])


def inside_midpoints(A: np.ndarray, eps: float, x: float, ys: np.ndarray) -> List[float]:
    """Midpoints of the crossing intervals on Re z = x that lie inside Λ_ε(A)."""
    mids = []
    for lo, hi in zip(ys[:-1], ys[1:]):
        mid = (lo + hi) / 2
        if hi > lo and _sigma_min(A, x + 1j * mid) <= eps:
            mids.append(mid)
    return mids


def _rightmost_on_lines(A: np.ndarray, eps: float, ys: List[float]) -> Optional[Tuple[float, float]]:
    best = None
    for y in ys:
        xs = horizontal_crossings(A, eps, y)
        if xs.size and (best is None or xs[-1] > best[0]):
            best = (float(xs[-1]), float(y))
    return best


def crisscross_matrix(A, eps: float, tol: Optional[float] = None) -> OracleResult:
    """α_ε(A) by alternating vertical and horizontal boundary searches.

    Raises:
        InputError: eps not positive
        OracleError: a search finds no boundary crossing
    """
    tol = Config.CRISSCROSS_TOL if tol is None else tol
    if not eps > 0:
        raise InputError(f"Criss-cross needs eps > 0, got {eps}")
    A = linalg.as_matrix(A)
    values = linalg.eigvals(A)
    top = values.real.max()
    start_ys = sorted({float(v.imag) for v in values if v.real >= top - linalg.TIE_RTOL * max(1.0, abs(top))})

    best = _rightmost_on_lines(A, eps, start_ys)
    if best is None:
        raise OracleError("Horizontal search through the rightmost eigenvalue found no boundary crossing")
    x, y = best

    for sweep in range(MAX_SWEEPS):
        mids = inside_midpoints(A, eps, x, vertical_crossings(A, eps, x))
        if not mids:
            break
        found = _rightmost_on_lines(A, eps, mids)
        if found is None or found[0] - x <= tol * max(1.0, abs(x)):
            if found is not None and found[0] > x:
                x, y = found
            break
        x, y = found
        logger.debug(f"criss-cross sweep {sweep + 1}: x={x:.15g}")
    else:
        logger.warning(f"Criss-cross stopped after {MAX_SWEEPS} sweeps at x={x:.15g}")

    logger.info(f"criss-cross: alpha={x:.12g}, z={complex(x, y):.10g}")
    return OracleResult(alpha=x, z=complex(x, y), method="crisscross", certified_tol=tol)
