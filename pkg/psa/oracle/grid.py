# psa/oracle/grid.py
"""Brute-force α_ε: backward error on a grid, zoomed refinement, then a root polish."""
import logging
from dataclasses import dataclass
from typing import List, Literal, Optional, Tuple

import numpy as np
from scipy.optimize import brentq, minimize_scalar

from ..algorithms.approx import parallel_map
from ..config import Config
from ..core import linalg
from ..core.matrix_function import MatrixFunction
from ..errors import InputError, OracleError, PsaError

logger = logging.getLogger(__name__)

OracleMethod = Literal["grid", "crisscross"]
ROW_CHUNK = 16
ROOT_XTOL = 1e-10


@dataclass(frozen=True)
class Region:
    re_min: float
    re_max: float
    im_min: float
    im_max: float
    grid_n: int = 201

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise InputError(f"Empty region: re [{self.re_min}, {self.re_max}], im [{self.im_min}, {self.im_max}]")
        if self.grid_n < 2:
            raise InputError(f"grid_n must be >= 2, got {self.grid_n}")

    @classmethod
    def around(cls, center: complex, half_width: float, grid_n: int = 201) -> "Region":
        return cls(center.real - half_width, center.real + half_width,
                   center.imag - half_width, center.imag + half_width, grid_n)

    @property
    def axes(self) -> Tuple[np.ndarray, np.ndarray]:
        return (np.linspace(self.re_min, self.re_max, self.grid_n),
                np.linspace(self.im_min, self.im_max, self.grid_n))

    @property
    def cell(self) -> float:
        return max(self.re_max - self.re_min, self.im_max - self.im_min) / (self.grid_n - 1)


@dataclass(frozen=True)
class OracleResult:
    alpha: float
    z: complex
    method: OracleMethod
    certified_tol: float


def default_region(T: MatrixFunction, eps: float, grid_n: Optional[int] = None) -> Region:
    """Square centered on the rightmost eigenvalue.

    Half-width 2·spread(Λ(T)) + 10ε·max(1, max g over the spectrum).
    """
    values = T.eigenvalues()
    values = values[np.isfinite(values)]
    center = linalg.rightmost_value(values)
    spread = float(np.max(np.abs(values - center))) if values.size > 1 else 0.0
    g_max = float(np.max(T.weighted_moduli(values)))
    half_width = 2 * spread + 10 * eps * max(1.0, g_max)
    if half_width == 0:
        half_width = 1.0
    return Region.around(center, half_width, grid_n or Config.GRID_N)


def backward_errors(T: MatrixFunction, zs: np.ndarray) -> np.ndarray:
    """φ(z) = σ_min(T(z))/g(z) for an array of points; inf where g vanishes."""
    zs = np.asarray(zs, dtype=complex)
    flat = zs.ravel()
    sigma = np.linalg.svd(T.evaluate_batch(flat), compute_uv=False)[:, -1]
    g = T.weighted_moduli(flat)
    with np.errstate(divide="ignore", invalid="ignore"):
        phi = np.where(g > 0, sigma / np.where(g > 0, g, 1.0), np.where(sigma == 0, 0.0, np.inf))
    return phi.reshape(zs.shape)


def phi_grid(T: MatrixFunction, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
    """Backward errors on the tensor grid, shape (len(ys), len(xs)), rows evaluated in parallel."""
    chunks = [ys[i:i + ROW_CHUNK] for i in range(0, ys.size, ROW_CHUNK)]

    def rows(chunk: np.ndarray) -> np.ndarray:
        return backward_errors(T, xs[None, :] + 1j * chunk[:, None])

    return np.vstack(parallel_map(rows, chunks))


def _rightmost_inside(T: MatrixFunction, eps: float, region: Region) -> Optional[complex]:
    xs, ys = region.axes
    inside = phi_grid(T, xs, ys) <= eps
    if not inside.any():
        return None
    cols = np.flatnonzero(inside.any(axis=0))
    col = cols[-1]
    rows = np.flatnonzero(inside[:, col])
    row = rows[np.argmin(np.abs(ys[rows] - np.median(ys[rows])))]
    return complex(xs[col], ys[row])


def _boundary_x(T: MatrixFunction, eps: float, y: float, x_in: float, step: float) -> float:
    """Rightmost crossing of φ(· + iy) = ε to the right of an inside point x_in."""
    def f(x: float) -> float:
        return float(backward_errors(T, np.array([x + 1j * y]))[0]) - eps

    if f(x_in) > 0:
        return -np.inf
    x_out = x_in + step
    for _ in range(60):
        if f(x_out) > 0:
            break
        x_in, x_out = x_out, x_out + 2 * (x_out - x_in)
    else:
        raise OracleError(f"No boundary crossing to the right of {x_in:.6g} on Im z = {y:.6g}")
    return brentq(f, x_in, x_out, xtol=ROOT_XTOL, rtol=4 * np.finfo(float).eps)


LOCAL_GRID_N = 21
CANDIDATE_SLACK = 2.0


def _zoom(T: MatrixFunction, eps: float, best: complex, half: float, grid_n: int, levels: int) -> Tuple[complex, float]:
    """Repeated tenfold zoom around the rightmost inside point; returns the point and the final cell."""
    cell = 2 * half / (grid_n - 1)
    for level in range(levels):
        half /= 10
        window = Region.around(best, half, grid_n)
        found = _rightmost_inside(T, eps, window)
        if found is None:
            break
        best, cell = found, window.cell
        logger.debug(f"grid level {level + 1}: best={best:.12g}, cell={cell:.2e}")
    return best, cell


def _finite_eigenvalues(T: MatrixFunction, region: Region) -> np.ndarray:
    try:
        values = T.eigenvalues()
    except PsaError as e:
        logger.debug(f"grid oracle: no eigenvalue seeds ({e})")
        return np.array([], dtype=complex)
    values = values[np.isfinite(values)]
    keep = ((values.real >= region.re_min) & (values.real <= region.re_max)
            & (values.imag >= region.im_min) & (values.imag <= region.im_max))
    return np.unique(values[keep])


def _polish(T: MatrixFunction, eps: float, best: complex, cell: float, polish_y: bool) -> complex:
    y_best = best.imag
    x_best = _boundary_x(T, eps, y_best, best.real, cell)
    if polish_y:
        res = minimize_scalar(
            lambda y: -_boundary_x(T, eps, y, best.real - cell, cell),
            bounds=(y_best - cell, y_best + cell),
            method="bounded",
            options={"xatol": 1e-9 * max(1.0, abs(y_best))},
        )
        if np.isfinite(res.fun) and -res.fun > x_best:
            x_best, y_best = -res.fun, float(res.x)
    return complex(x_best, y_best)


def grid_psa(T: MatrixFunction, eps: float, region: Optional[Region] = None,
             refine_depth: Optional[int] = None, polish_y: bool = True) -> OracleResult:
    """Rightmost point of Λ_ε(T) by grid search.

    Components of Λ_ε thinner than a grid cell are invisible on the base grid,
    so every eigenvalue in the region is zoomed into as well: each one lies in
    Λ_ε and anchors its own component. The rightmost polished candidate wins.

    Raises:
        InputError: eps not positive
        OracleError: neither a grid point nor an eigenvalue of the region lies in Λ_ε
    """
    if not eps > 0:
        raise InputError(f"Grid oracle needs eps > 0, got {eps}")
    region = region or default_region(T, eps)
    depth = Config.GRID_REFINE_DEPTH if refine_depth is None else refine_depth
    half = max(region.re_max - region.re_min, region.im_max - region.im_min) / 2

    candidates: List[Tuple[complex, float]] = []
    start = _rightmost_inside(T, eps, region)
    if start is not None:
        candidates.append(_zoom(T, eps, start, half, region.grid_n, depth))

    # local grids are coarser, so they take extra levels to reach the base resolution
    local_n = min(LOCAL_GRID_N, region.grid_n)
    local_levels = depth + int(np.ceil(np.log10((region.grid_n - 1) / (local_n - 1))))
    for mu in _finite_eigenvalues(T, region):
        candidates.append(_zoom(T, eps, complex(mu), half, local_n, local_levels))

    if not candidates:
        raise OracleError(f"No point of the {region.grid_n}x{region.grid_n} grid lies in the {eps}-pseudospectrum")

    lead = max(z.real for z, _ in candidates)
    contenders = [(z, cell) for z, cell in candidates if z.real + CANDIDATE_SLACK * cell >= lead]
    polished = [(_polish(T, eps, z, cell, polish_y), cell) for z, cell in contenders]
    z, cell = max(polished, key=lambda item: item[0].real)
    certified = max(c for _, c in contenders)

    logger.info(f"grid oracle: alpha={z.real:.12g}, z={z:.10g}, {len(candidates)} candidates, cell={certified:.2e}")
    return OracleResult(alpha=z.real, z=z, method="grid", certified_tol=certified)


def boundary_samples(T: MatrixFunction, eps: float, region: Region, rows: Optional[int] = None) -> List[Tuple[float, float]]:
    """Points (x, y) with φ(x + iy) = ε, found per grid column by bracketing sign changes of φ − ε."""
    if not eps > 0:
        raise InputError(f"Boundary sampling needs eps > 0, got {eps}")
    xs, _ = region.axes
    ys = np.linspace(region.im_min, region.im_max, rows or region.grid_n)
    excess = phi_grid(T, xs, ys) - eps

    def column(j: int) -> List[Tuple[float, float]]:
        x = float(xs[j])
        f_col = excess[:, j]

        def f(y: float) -> float:
            return float(backward_errors(T, np.array([x + 1j * y]))[0]) - eps

        points = [(x, float(ys[i])) for i in np.flatnonzero(f_col == 0)]
        for i in np.flatnonzero(f_col[:-1] * f_col[1:] < 0):
            points.append((x, brentq(f, ys[i], ys[i + 1], xtol=1e-14, rtol=4 * np.finfo(float).eps)))
        return sorted(points, key=lambda p: p[1])

    samples = [p for col in parallel_map(column, range(xs.size)) for p in col]
    logger.info(f"boundary: {len(samples)} samples over {xs.size} columns")
    return samples
