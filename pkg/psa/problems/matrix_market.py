# psa/problems/matrix_market.py
import logging
import os

import numpy as np
import scipy.io
import scipy.sparse

from ..config import Config
from ..core import linalg
from ..errors import InputError

logger = logging.getLogger(__name__)

SUPPORTED_FIELDS = ("real", "complex", "integer")


def load_matrix_market(path: str, max_dim: int = None, square: bool = True) -> np.ndarray:
    """Dense matrix from a Matrix Market file (coordinate or array), square unless `square` is False.

    Symmetric, skew-symmetric and Hermitian storage is expanded.

    Raises:
        InputError: missing file, malformed header or entries, unsupported field,
            non-square shape, or size above the configured cap
    """
    max_dim = Config.MM_MAX_DIM if max_dim is None else max_dim
    if not os.path.isfile(path):
        raise InputError(f"Matrix file not found: {path}")
    try:
        rows, cols, entries, fmt, field, symmetry = scipy.io.mminfo(path)
    except (ValueError, OSError, IndexError, RuntimeError) as e:
        raise InputError(f"Malformed Matrix Market header in {path}: {e}") from e

    if field not in SUPPORTED_FIELDS:
        raise InputError(f"Unsupported Matrix Market field '{field}' in {path}")
    if square and rows != cols:
        raise InputError(f"Matrix in {path} is {rows}x{cols}; a square matrix is required")
    if max(rows, cols) > max_dim:
        raise InputError(f"Matrix in {path} has dimension {max(rows, cols)}, above the limit {max_dim} (PSA_MM_MAX_DIM)")

    try:
        data = scipy.io.mmread(path)
    except (ValueError, OSError, IndexError, TypeError, RuntimeError) as e:
        raise InputError(f"Malformed Matrix Market data in {path}: {e}") from e
    if scipy.sparse.issparse(data):
        data = data.toarray()

    logger.info(f"Loaded {rows}x{cols} {fmt} {field} {symmetry} matrix from {path}")
    return linalg.as_matrix(data, name=os.path.basename(path), square=square)


def write_matrix_market(path: str, A, comment: str = "") -> None:
    """Write A in dense array format with full double precision."""
    A = linalg.as_matrix(A, square=False)
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, "wb") as fh:
        scipy.io.mmwrite(fh, A, comment=comment, field="complex" if np.iscomplexobj(A) else "real", precision=17)
    logger.info(f"Wrote {A.shape[0]}x{A.shape[1]} matrix to {path}")
