# psa/main.py
import argparse
import logging
import sys
from typing import List, Optional

from .config import Config
from .cli.commands import cmd_boundary, cmd_psa, cmd_sweep
from .cli.error_handler import EXIT_ERROR, handle_exception
from .utils.logging_config import setup_logging

logger = logging.getLogger(__name__)

SUBCOMMANDS = ("sweep", "boundary")


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    source = common.add_mutually_exclusive_group(required=True)
    source.add_argument("--gen", help="Generated problem, e.g. damping:n=80,k=400 or grcar:100")
    source.add_argument("--input", help="Matrix Market file with a square matrix A")
    common.add_argument("--feedback", help="B.mtx,C.mtx: add ν·B·Cᵀ to A (sweep with --param nu)")
    common.add_argument("--weights", help="Comma-separated perturbation weights, one per term")
    common.add_argument("--eps", type=float, help="Perturbation level ε")
    common.add_argument("--alg", default="fp-nep", choices=sorted(Config.AVAILABLE_ALGORITHMS),
                        help="Algorithm (default: fp-nep)")
    common.add_argument("--restarts", type=int, default=Config.DEFAULT_RESTARTS,
                        help="Number of restarts from the best-scoring eigenvalues")
    common.add_argument("--tol", type=float, default=None, help="Termination tolerance")
    common.add_argument("--max-iter", type=int, default=None, help="Iteration limit")
    common.add_argument("--termination", choices=["absolute_complex", "relative_real"], default=None)
    common.add_argument("--init", default=None,
                        help="Initial point: largest_imag, first_order, score (NEP) or first, second, hybrid (matrix)")
    common.add_argument("--oracle", choices=["grid", "crisscross"], default=None,
                        help="Also compute a reference value and the error against it")
    common.add_argument("--dump", help="Write the (generated) matrix to this Matrix Market file")
    common.add_argument("--log-level", default=None, choices=["DEBUG", "INFO", "WARNING", "ERROR"])
    return common


def build_parser(command: Optional[str] = None) -> argparse.ArgumentParser:
    common = _common_parser()
    if command == "sweep":
        parser = argparse.ArgumentParser(prog="psa sweep", parents=[common],
                                         description="Sweep ε or a problem parameter and write CSV")
        parser.add_argument("--eps-range", help="lo:hi:count, log-spaced")
        parser.add_argument("--param-range", help="lo:hi:count, linearly spaced")
        parser.add_argument("--param", default="nu", help="Problem parameter swept by --param-range (default: nu)")
        parser.add_argument("--companion", help="Comma-separated algorithms evaluated at every point")
        parser.set_defaults(handler=cmd_sweep)
    elif command == "boundary":
        parser = argparse.ArgumentParser(prog="psa boundary", parents=[common],
                                         description="Sample the ε-pseudospectrum boundary and write CSV")
        parser.add_argument("--region", help="re_min,re_max,im_min,im_max")
        parser.add_argument("--columns", type=int, default=None, help="Grid columns (default: PSA_GRID_N)")
        parser.add_argument("--rows", type=int, default=None, help="Grid rows (default: --columns)")
        parser.set_defaults(handler=cmd_boundary)
    else:
        parser = argparse.ArgumentParser(prog="psa", parents=[common],
                                         description="Compute the ε-pseudospectral abscissa")
        parser.set_defaults(handler=cmd_psa)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    command = argv[0] if argv and argv[0] in SUBCOMMANDS else None
    if command:
        argv = argv[1:]

    try:
        args = build_parser(command).parse_args(argv)
    except SystemExit as e:
        # argparse exits with 2 on usage errors; 2 is reserved for non-convergence
        return EXIT_ERROR if e.code else 0

    try:
        setup_logging(args.log_level or ("DEBUG" if Config.DEBUG else None))
        Config.validate_config()
        logger.debug(f"Running {command or 'psa'} ({Config.ENVIRONMENT}) with {vars(args)}")
        return args.handler(args)
    except Exception as e:
        return handle_exception(e)


if __name__ == "__main__":
    sys.exit(main())
