# psa/algorithms/approx.py
"""Eigenvalue perturbation estimates of the pseudospectral abscissa.

First-order scores predict how far right each eigenvalue moves under the
worst unit perturbation; the largest score estimates α_ε with O(ε²) error.
For matrices a second-order direction built from eigenvector difference
quotients improves this to O(ε³). The same machinery produces starting
points for the fixed-point iterations.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterable, List, Literal, Optional, Tuple, TypeVar, Union

import numpy as np

from ..config import Config
from ..core import linalg, nep
from ..core.matrix_function import MatrixFunction, Perturbation
from ..errors import AmbiguousMatchError, DegenerateError, InputError, PsaError

logger = logging.getLogger(__name__)

InitStrategy = Literal["first", "second", "hybrid"]
MATCH_DOMINANCE = 10.0

_T = TypeVar("_T")
_R = TypeVar("_R")


def parallel_map(fn: Callable[[_T], _R], items: Iterable[_T], max_workers: Optional[int] = None) -> List[_R]:
    """Order-preserving map over a thread pool capped by PSA_THREADS."""
    items = list(items)
    workers = min(max_workers or Config.PSA_THREADS, len(items))
    if workers <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass
class EigenScore:
    """Score of one eigenvalue: Re(μ0) + ε·rate (order 1) or α(A + εΔ̃*) (order 2)."""

    mu: complex
    score: float
    rate: float
    usable: bool = True
    x: Optional[np.ndarray] = field(default=None, repr=False)
    y: Optional[np.ndarray] = field(default=None, repr=False)
    note: str = ""


@dataclass
class SecondOrderData:
    h: float
    x_p: np.ndarray
    y_p: np.ndarray
    beta_p: complex
    direction: Optional[np.ndarray] = None


@dataclass
class EstimateReport:
    eps: float
    order: int
    per_eig: List[EigenScore]
    argmax_index: int
    estimate: float
    init_point: complex
    direction: Union[Perturbation, np.ndarray, None] = None

    @property
    def argmax(self) -> EigenScore:
        return self.per_eig[self.argmax_index]

    def ranked(self) -> List[int]:
        """Indices of usable eigenvalues by decreasing score."""
        usable = [i for i, e in enumerate(self.per_eig) if e.usable]
        return sorted(usable, key=lambda i: -self.per_eig[i].score)


def _argmax(per_eig: List[EigenScore]) -> int:
    usable = [i for i, e in enumerate(per_eig) if e.usable]
    if not usable:
        raise DegenerateError("No usable eigenvalue: every eigenvalue is defective or nearly so")
    return max(usable, key=lambda i: per_eig[i].score)


def _check_eps(eps: float):
    if not np.isfinite(eps) or eps < 0:
        raise InputError(f"eps must be finite and nonnegative, got {eps}")


def first_order_scores_nep(T: MatrixFunction, eps: float, max_workers: Optional[int] = None) -> EstimateReport:
    """First-order scores Re(μ0) + ε·g(μ0)/|y*T'(μ0)x| for every finite eigenvalue of T."""
    _check_eps(eps)
    values = T.eigenvalues()

    def score(mu: complex) -> EigenScore:
        mu = complex(mu)
        triple = linalg.min_singular_triple(T.evaluate(mu))
        try:
            opt = nep.optimal_direction(T, mu, triple.v, triple.u)
        except DegenerateError as e:
            logger.warning(f"Eigenvalue {mu:.6g} excluded from the first-order estimate: {e}")
            return EigenScore(mu=mu, score=-np.inf, rate=np.inf, usable=False, note=str(e))
        return EigenScore(mu=mu, score=mu.real + eps * opt.rate, rate=opt.rate, x=opt.x, y=opt.y)

    per_eig = parallel_map(score, values, max_workers)
    best = _argmax(per_eig)
    top = per_eig[best]
    direction = nep.optimal_direction(T, top.mu, top.x, top.y).direction
    return EstimateReport(
        eps=eps,
        order=1,
        per_eig=per_eig,
        argmax_index=best,
        estimate=top.score,
        init_point=top.mu + eps * top.rate,
        direction=direction,
    )


def _phase_pair(x: np.ndarray, y: np.ndarray) -> Tuple[np.ndarray, complex]:
    """Rotate y so that y*x is real and positive; returns (y, y*x)."""
    c = np.vdot(y, x)
    if c == 0:
        return y, 0.0
    y = y * (c / abs(c))
    return y, complex(np.vdot(y, x))


def first_order_scores_matrix(A, eps: float) -> EstimateReport:
    """Scores Re(μ0) + ε/|y*x| for every eigenvalue of A."""
    _check_eps(eps)
    A = linalg.as_matrix(A)
    system = linalg.eig_full(A)
    values = system.values

    if values.size > 1:
        dist = np.abs(values[:, None] - values[None, :]) + np.diag(np.full(values.size, np.inf))
        near = dist.min(axis=1) < 1e-10 * np.maximum(1.0, np.abs(values))
        if near.any():
            logger.warning(f"{int(near.sum())} eigenvalues are not numerically simple; their scores are unreliable")

    per_eig = []
    for i in range(values.size):
        mu, x, y = system.triple(i)
        y, c = _phase_pair(x, y)
        if abs(c) < Config.EIGVEC_INNER_TOL:
            logger.warning(f"Eigenvalue {mu:.6g} excluded: |y*x| = {abs(c):.2e} (near-defective)")
            per_eig.append(EigenScore(mu=mu, score=-np.inf, rate=np.inf, usable=False, x=x, y=y,
                                      note="near-defective"))
            continue
        rate = 1.0 / abs(c)
        per_eig.append(EigenScore(mu=mu, score=mu.real + eps * rate, rate=rate, x=x, y=y))

    best = _argmax(per_eig)
    top = per_eig[best]
    return EstimateReport(
        eps=eps,
        order=1,
        per_eig=per_eig,
        argmax_index=best,
        estimate=top.score,
        init_point=top.mu + eps * top.rate,
        direction=np.outer(top.y, top.x.conj()),
    )


def default_step(eps: float) -> float:
    """Difference-quotient step max(sqrt(u), 1e-2·ε)."""
    return max(np.sqrt(np.finfo(float).eps), 1e-2 * eps)


def perturbed_eigpair(A, mu0: complex, x: np.ndarray, y: np.ndarray, h: float) -> SecondOrderData:
    """Difference quotients of the eigenvectors of A + h·yx* at the eigenvalue closest to μ0.

    Raises:
        InputError: h not positive
        AmbiguousMatchError: the closest perturbed eigenvalue is not 10x closer than the runner-up
    """
    if not h > 0:
        raise InputError(f"Step h must be positive, got {h}")
    A = linalg.as_matrix(A)
    y, yx = _phase_pair(x, y)
    if yx == 0:
        raise DegenerateError(f"y*x vanishes at μ={mu0:.6g}")

    system = linalg.eig_full(A + h * np.outer(y, x.conj()))
    dist = np.abs(system.values - mu0)
    order = np.argsort(dist)
    if order.size > 1 and dist[order[1]] <= MATCH_DOMINANCE * dist[order[0]]:
        raise AmbiguousMatchError(
            f"Perturbed eigenvalue near {mu0:.6g} is ambiguous: distances {dist[order[0]]:.3e} and {dist[order[1]]:.3e}"
        )
    _, x_new, y_new = system.triple(int(order[0]))

    x_new = linalg.align_phase(x_new, ref=x)
    y_new, _ = _phase_pair(x_new, y_new)

    x_p = (x_new - x) / h
    y_p = (y_new - y) / h
    beta_p = -(np.vdot(y_p, x) + np.vdot(y, x_p)) / yx
    return SecondOrderData(h=h, x_p=x_p, y_p=y_p, beta_p=complex(beta_p))


def second_order_direction(A, eps: float, mu0: complex, x: np.ndarray, y: np.ndarray,
                           h: Optional[float] = None) -> SecondOrderData:
    """Unit-Frobenius direction yx* + (ε/2)(y_p x* + y x_p* + β_p yx*), normalized."""
    h = default_step(eps) if h is None else h
    y, _ = _phase_pair(x, y)
    data = perturbed_eigpair(A, mu0, x, y, h)
    yx_star = np.outer(y, x.conj())
    N = yx_star + (eps / 2) * (np.outer(data.y_p, x.conj()) + np.outer(y, data.x_p.conj()) + data.beta_p * yx_star)
    data.direction = N / np.linalg.norm(N, "fro")
    return data


def first_order_point(A: np.ndarray, eps: float, entry: EigenScore) -> complex:
    B = A + eps * np.outer(entry.y, entry.x.conj())
    return linalg.rightmost_value(linalg.eigvals(B))


def second_order_point(A: np.ndarray, eps: float, entry: EigenScore, h: Optional[float] = None,
                       fallback: bool = True) -> Tuple[complex, Optional[np.ndarray]]:
    """Rightmost eigenvalue of A + εΔ̃* for one eigenvalue, with the direction used.

    When the eigenvalue match is ambiguous and `fallback` is set, the
    first-order direction yx* is used instead and None is returned for Δ̃*.
    """
    try:
        data = second_order_direction(A, eps, entry.mu, entry.x, entry.y, h)
    except AmbiguousMatchError as e:
        if not fallback:
            raise
        logger.warning(f"Second-order direction unavailable at {entry.mu:.6g}, using first order: {e}")
        return first_order_point(A, eps, entry), None
    vals = linalg.eigvals(A + eps * data.direction)
    return linalg.rightmost_value(vals), data.direction


def second_order_estimate(A, eps: float, h: Optional[float] = None, max_workers: Optional[int] = None) -> EstimateReport:
    """max over μ0 of α(A + ε Δ̃*_{μ0})."""
    A = linalg.as_matrix(A)
    first = first_order_scores_matrix(A, eps)

    def score(entry: EigenScore) -> Tuple[EigenScore, Optional[complex], Optional[np.ndarray]]:
        if not entry.usable:
            return entry, None, None
        try:
            data = second_order_direction(A, eps, entry.mu, entry.x, entry.y, h)
        except AmbiguousMatchError as e:
            logger.warning(f"Eigenvalue {entry.mu:.6g} excluded from the second-order estimate: {e}")
            return EigenScore(mu=entry.mu, score=-np.inf, rate=entry.rate, usable=False,
                              x=entry.x, y=entry.y, note=str(e)), None, None
        z = linalg.rightmost_value(linalg.eigvals(A + eps * data.direction))
        return EigenScore(mu=entry.mu, score=z.real, rate=entry.rate, x=entry.x, y=entry.y), z, data.direction

    results = parallel_map(score, first.per_eig, max_workers)
    per_eig = [r[0] for r in results]
    best = _argmax(per_eig)
    _, z_best, direction = results[best]
    return EstimateReport(
        eps=eps,
        order=2,
        per_eig=per_eig,
        argmax_index=best,
        estimate=per_eig[best].score,
        init_point=z_best,
        direction=direction,
    )


def init_point_matrix(A, eps: float, strategy: InitStrategy = "hybrid") -> Tuple[complex, complex]:
    """Starting point z0 for the matrix fixed-point iteration and the eigenvalue it came from."""
    A = linalg.as_matrix(A)
    if strategy == "second":
        report = second_order_estimate(A, eps)
        return report.init_point, report.argmax.mu

    first = first_order_scores_matrix(A, eps)
    entry = first.argmax
    if strategy == "first":
        return first_order_point(A, eps, entry), entry.mu
    if strategy == "hybrid":
        z0, _ = second_order_point(A, eps, entry)
        return z0, entry.mu
    raise InputError(f"Unknown init strategy '{strategy}'. Available: first, second, hybrid")


def init_point_nep(T: MatrixFunction, eps: float) -> complex:
    """μ̃_ε refined to the closest eigenvalue of T + εΔ̃T* when T is polynomial."""
    report = first_order_scores_nep(T, eps)
    if eps == 0:
        return report.argmax.mu
    if not T.is_polynomial:
        return report.init_point
    try:
        values = T.perturbed(report.direction, eps).eigenvalues()
    except PsaError as e:
        logger.warning(f"Perturbed spectrum unavailable, using the first-order point: {e}")
        return report.init_point
    return complex(values[linalg.closest(values, report.init_point)])
