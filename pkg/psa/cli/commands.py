# psa/cli/commands.py
"""The three CLI commands: a single run, parameter sweeps and boundary samples."""
import csv
import logging
import sys
import time
from argparse import Namespace
from typing import Dict, List, Optional, TextIO

from ..algorithms.algorithm_factory import AlgorithmFactory
from ..algorithms.approx import first_order_scores_matrix, first_order_scores_nep, parallel_map, second_order_estimate
from ..algorithms.base_iteration import FixedPointConfig
from ..algorithms.restarts import run_with_restarts
from ..config import Config
from ..errors import InputError
from ..oracle.crisscross import crisscross_matrix
from ..oracle.grid import Region, boundary_samples, default_region, grid_psa
from ..problems.base_problem import BaseProblem
from ..problems.matrix_market import write_matrix_market
from ..problems.problem_factory import ProblemFactory
from ..utils.spec_parser import parse_range, parse_weights
from .error_handler import EXIT_NONCONVERGENCE, EXIT_OK, exit_code_for_status
from .metrics import RunMetrics
from .records import RunRecord, SweepRow

logger = logging.getLogger(__name__)


def build_problem(args: Namespace) -> BaseProblem:
    if args.input:
        feedback = args.feedback.split(",") if getattr(args, "feedback", None) else None
        problem = ProblemFactory.from_file(args.input, feedback=feedback)
    else:
        problem = ProblemFactory.create_problem(args.gen)
    if args.weights:
        weights = parse_weights(args.weights)
        if len(weights) != problem.function.kappa:
            raise InputError(f"{problem.problem_id} has {problem.function.kappa} terms, got {len(weights)} weights")
        problem = problem.with_weights(weights)
    if getattr(args, "dump", None):
        if not problem.is_matrix:
            raise InputError("--dump needs a matrix problem")
        write_matrix_market(args.dump, problem.matrix, comment=problem.problem_id)
    return problem


def fixed_point_config(args: Namespace, eps: float) -> FixedPointConfig:
    options = {
        "eps": eps,
        "restarts": args.restarts,
        "termination": args.termination,
        "init": args.init,
    }
    if args.tol is not None:
        options["tol"] = args.tol
    if args.max_iter is not None:
        options["max_iter"] = args.max_iter
    return FixedPointConfig(**options)


def _matrix_of(problem: BaseProblem, algorithm: str):
    if not problem.is_matrix:
        raise InputError(f"'{algorithm}' needs a matrix problem; {problem.problem_id} is a matrix-valued function")
    return problem.matrix


def run_oracle(problem: BaseProblem, eps: float, method: str) -> float:
    if method == "crisscross":
        return crisscross_matrix(_matrix_of(problem, method), eps).alpha
    if method == "grid":
        return grid_psa(problem.function, eps).alpha
    raise InputError(f"Unknown oracle '{method}'. Available: grid, crisscross")


def execute(problem: BaseProblem, eps: float, algorithm: str, args: Namespace) -> RunRecord:
    """Run one algorithm on one problem and describe the outcome as a RunRecord."""
    spec = Config.get_algorithm_config(algorithm)
    start = time.perf_counter()
    strategy = None
    iterations = None
    status = "converged"
    N = 1

    if spec["kind"] == "fixed_point":
        cfg = fixed_point_config(args, eps)
        target = _matrix_of(problem, algorithm) if spec["problem"] == "matrix" else problem.function
        if cfg.restarts > 1:
            result = run_with_restarts(target, cfg, algorithm)
        else:
            result = AlgorithmFactory.create_algorithm(algorithm, target, cfg).run()
        alpha, z = result.alpha, result.z
        iterations, status, N = result.iterations, result.status, max(1, len(result.runs))
        strategy = cfg.init or ("hybrid" if spec["problem"] == "matrix" else "largest_imag")
    elif algorithm == "first-order":
        report = (first_order_scores_matrix(problem.matrix, eps) if problem.is_matrix
                  else first_order_scores_nep(problem.function, eps))
        alpha, z = report.estimate, report.init_point
    elif algorithm == "second-order":
        report = second_order_estimate(_matrix_of(problem, algorithm), eps)
        alpha, z = report.estimate, report.init_point
    elif algorithm == "grid":
        oracle = grid_psa(problem.function, eps)
        alpha, z = oracle.alpha, oracle.z
    else:
        oracle = crisscross_matrix(_matrix_of(problem, algorithm), eps)
        alpha, z = oracle.alpha, oracle.z

    elapsed = (time.perf_counter() - start) * 1000
    logger.info(f"{algorithm} on {problem.problem_id}: eps={eps}, alpha={alpha}, status={status}, time={elapsed:.1f}ms")
    record = RunRecord(
        problem=problem.problem_id,
        eps=eps,
        algorithm=algorithm,
        strategy=strategy,
        N=N,
        alpha=alpha,
        z=complex(z),
        iterations=iterations,
        wall_time_ms=elapsed,
        status=status,
    )
    if getattr(args, "oracle", None):
        record = record.with_oracle(run_oracle(problem, eps, args.oracle))
    return record


def _write(stream: TextIO, text: str):
    stream.write(text + "\n")
    stream.flush()


def cmd_psa(args: Namespace, out: TextIO = None) -> int:
    out = out or sys.stdout
    if args.eps is None:
        raise InputError("--eps is required")
    problem = build_problem(args)
    record = execute(problem, args.eps, args.alg, args)
    _write(out, record.to_json())
    return exit_code_for_status(record.status)


def cmd_sweep(args: Namespace, out: TextIO = None) -> int:
    out = out or sys.stdout
    if bool(args.eps_range) == bool(args.param_range):
        raise InputError("Give exactly one of --eps-range and --param-range")
    base = build_problem(args)

    if args.eps_range:
        grid = parse_range(args.eps_range, log=True)
        points = [("eps", float(e), base, float(e)) for e in grid]
    else:
        if args.eps is None:
            raise InputError("--param-range needs a fixed --eps")
        grid = parse_range(args.param_range)
        points = [(args.param, float(v), base.with_params(**{args.param: float(v)}), args.eps) for v in grid]

    companions = [c.strip() for c in args.companion.split(",")] if args.companion else []
    for name in companions:
        Config.get_algorithm_config(name)
    metrics = RunMetrics()

    def run_point(point) -> SweepRow:
        param, value, problem, eps = point
        record = execute(problem, eps, args.alg, args)
        metrics.record_run(args.alg, record.status, record.wall_time_ms, record.iterations)
        extra: Dict[str, Optional[float]] = {}
        for name in companions:
            extra[name] = execute(problem, eps, name, Namespace(**{**vars(args), "oracle": None})).alpha
        return SweepRow(**record.model_dump(), param=param, value=value, companions=extra)

    rows: List[SweepRow] = parallel_map(run_point, points)

    writer = None
    for row in rows:
        if writer is None:
            writer = csv.DictWriter(out, fieldnames=row.csv_columns(), lineterminator="\n")
            writer.writeheader()
        writer.writerow(row.csv_row())
    out.flush()

    metrics.log_summary()
    return EXIT_OK if all(r.status == "converged" for r in rows) else EXIT_NONCONVERGENCE


def _parse_region(text: str, grid_n: int) -> Region:
    parts = [float(p) for p in text.split(",")]
    if len(parts) != 4:
        raise InputError(f"Region must be re_min,re_max,im_min,im_max, got '{text}'")
    return Region(*parts, grid_n=grid_n)


def cmd_boundary(args: Namespace, out: TextIO = None) -> int:
    out = out or sys.stdout
    if args.eps is None:
        raise InputError("--eps is required")
    problem = build_problem(args)
    grid_n = args.columns or Config.GRID_N
    region = _parse_region(args.region, grid_n) if args.region else default_region(problem.function, args.eps, grid_n)
    samples = boundary_samples(problem.function, args.eps, region, rows=args.rows)

    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["x", "y"])
    for x, y in samples:
        writer.writerow([repr(float(x)), repr(float(y))])
    out.flush()
    return EXIT_OK
