# psa/cli/error_handler.py
import json
import logging
import sys
import traceback
from typing import TextIO

from pydantic import ValidationError

from ..errors import InputError, OracleError, PsaError

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_NONCONVERGENCE = 2

_STATUS_CODES = {
    "converged": EXIT_OK,
    "max_iter": EXIT_NONCONVERGENCE,
    "stagnated": EXIT_NONCONVERGENCE,
    "failed": EXIT_ERROR,
}


def exit_code_for_status(status: str) -> int:
    return _STATUS_CODES.get(status, EXIT_ERROR)


def _emit(payload: dict, stream: TextIO):
    stream.write(json.dumps(payload) + "\n")
    stream.flush()


def handle_exception(exc: BaseException, stream: TextIO = None) -> int:
    """Log the exception, write a one-line JSON diagnostic to stderr and return the exit code"""
    stream = stream or sys.stderr

    if isinstance(exc, ValidationError):
        logger.warning(f"Validation error: {exc}")
        errors = [
            {"field": " -> ".join(str(loc) for loc in err["loc"]), "message": err["msg"], "type": err["type"]}
            for err in exc.errors()
        ]
        _emit({"error": "Validation Error", "message": "Invalid arguments", "details": errors}, stream)
        return EXIT_ERROR

    if isinstance(exc, InputError):
        logger.error(f"Input error: {exc}")
        _emit({"error": "Input Error", "type": type(exc).__name__, "message": str(exc)}, stream)
        return EXIT_ERROR

    if isinstance(exc, OracleError):
        logger.error(f"Oracle error: {exc}")
        _emit({"error": "Oracle Error", "type": type(exc).__name__, "message": str(exc)}, stream)
        return EXIT_ERROR

    if isinstance(exc, PsaError):
        logger.error(f"Computation error: {exc}")
        _emit({"error": "Computation Error", "type": type(exc).__name__, "message": str(exc)}, stream)
        return EXIT_ERROR

    if isinstance(exc, (ValueError, OSError)):
        logger.error(f"Value error: {exc}")
        _emit({"error": "Value Error", "type": type(exc).__name__, "message": str(exc)}, stream)
        return EXIT_ERROR

    logger.error(f"Unhandled exception: {exc}")
    logger.error(f"Traceback: {traceback.format_exc()}")
    _emit({"error": "Internal Error", "type": type(exc).__name__, "message": "An unexpected error occurred"}, stream)
    return EXIT_ERROR
