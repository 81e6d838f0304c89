# psa/utils/spec_parser.py
"""Parsers for the small argument languages of the CLI.

    grcar:100                          -> ("grcar", {"n": 100})
    damping:n=20,xi=0.005,k=25         -> ("damping", {"n": 20, "xi": 0.005, "k": 25})
    1,1,1                              -> (1.0, 1.0, 1.0)
    1e-3:1e-1:8                        -> 8 points from 1e-3 to 1e-1
"""
import logging
from typing import Any, Dict, Tuple

import numpy as np

from ..errors import InputError

logger = logging.getLogger(__name__)


def _number(text: str):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return float(text)
    except ValueError:
        raise InputError(f"Expected a number, got '{text}'") from None


def parse_problem_spec(spec: str) -> Tuple[str, Dict[str, Any]]:
    """'name' or 'name:n' or 'name:key=value,...' (a bare leading value is the size n)."""
    name, _, rest = spec.partition(":")
    name = name.strip().lower()
    if not name:
        raise InputError(f"Problem spec '{spec}' has no name")
    params: Dict[str, Any] = {}
    for i, item in enumerate(filter(None, (s.strip() for s in rest.split(",")))):
        key, sep, value = item.partition("=")
        if not sep:
            if i == 0:
                params["n"] = _number(key)
                continue
            raise InputError(f"Expected key=value in '{spec}', got '{item}'")
        params[key.strip()] = _number(value)
    return name, params


def parse_weights(text: str) -> Tuple[float, ...]:
    weights = tuple(float(_number(w)) for w in text.split(",") if w.strip())
    if not weights:
        raise InputError("Empty weight list")
    if any(w < 0 for w in weights):
        raise InputError(f"Weights must be nonnegative, got {weights}")
    return weights


def parse_range(text: str, log: bool = False) -> np.ndarray:
    """'lo:hi:count' as a linear or logarithmic grid.

    Raises:
        InputError: malformed text, count < 1, lo > hi, or nonpositive bounds on a log grid
    """
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError(f"Range must be lo:hi:count, got '{text}'")
    lo, hi = float(_number(parts[0])), float(_number(parts[1]))
    count = _number(parts[2])
    if not isinstance(count, int) or count < 1:
        raise InputError(f"Range count must be a positive integer, got '{parts[2]}'")
    if lo > hi:
        raise InputError(f"Empty range: {lo} > {hi}")
    if log:
        if lo <= 0:
            raise InputError(f"Logarithmic range needs positive bounds, got {lo}")
        return np.logspace(np.log10(lo), np.log10(hi), count)
    return np.linspace(lo, hi, count)
