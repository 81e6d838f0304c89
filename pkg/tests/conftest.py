# tests/conftest.py
import json
import logging
from pathlib import Path

import numpy as np
import pytest

from psa.core.matrix_function import MatrixFunction
from psa.problems.generators import DampingSpec, damping_function, grcar, random_matrix

REFERENCE_FILE = Path(__file__).resolve().parent.parent / "data" / "test_cases" / "reference_values.json"


@pytest.fixture(scope="session")
def reference_values():
    with open(REFERENCE_FILE) as f:
        return json.load(f)


@pytest.fixture(scope="session")
def damping20() -> MatrixFunction:
    """n=20, ξ=0.005, k=25, no external damper, weights (1, 1, 1)."""
    return damping_function(DampingSpec())


@pytest.fixture
def normal_matrix() -> np.ndarray:
    """Diagonal matrix with a unique rightmost eigenvalue 1 + 2i."""
    return np.diag([1 + 2j, -1 + 0.5j, 0.25 - 1j])


@pytest.fixture
def small_random() -> np.ndarray:
    return random_matrix(6, c1=1.0, c2=0.5, seed=11)


@pytest.fixture
def grcar10() -> np.ndarray:
    return grcar(10)


@pytest.fixture(autouse=True)
def _reset_root_handlers():
    """The CLI installs handlers bound to the captured streams of one test."""
    root = logging.getLogger()
    level = root.level
    yield
    root.setLevel(level)
    for handler in list(root.handlers):
        if type(handler).__module__.startswith("_pytest"):
            continue
        root.removeHandler(handler)
