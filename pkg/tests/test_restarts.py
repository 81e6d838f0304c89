# tests/test_restarts.py
import numpy as np
import pytest

from psa.algorithms.base_iteration import FixedPointConfig
from psa.algorithms.fixedpoint import fp_matrix, fp_nep
from psa.algorithms.restarts import run_with_restarts
from psa.oracle.crisscross import crisscross_matrix
from psa.problems.generators import random_matrix


def test_single_run_matches_direct_matrix_call(small_random):
    cfg = FixedPointConfig(eps=0.1)
    direct = fp_matrix(small_random, cfg)
    restarted = run_with_restarts(small_random, cfg)
    assert restarted.alpha == direct.alpha
    assert restarted.trace.iterates == direct.trace.iterates
    assert len(restarted.runs) == 1


def test_single_run_matches_direct_nep_call(damping20):
    cfg = FixedPointConfig(eps=0.1, init="score")
    direct = fp_nep(damping20, cfg)
    restarted = run_with_restarts(damping20, cfg, "fp-nep")
    assert restarted.alpha == pytest.approx(direct.alpha, abs=1e-12)


def test_best_run_is_kept(small_random):
    cfg = FixedPointConfig(eps=0.3, restarts=4)
    result = run_with_restarts(small_random, cfg)
    assert len(result.runs) == 4
    finished = [t.last.real for t in result.runs if t.status != "failed"]
    assert result.alpha == max(finished)
    assert result.trace in result.runs


def test_restarts_are_clamped(normal_matrix, caplog):
    result = run_with_restarts(normal_matrix, FixedPointConfig(eps=0.1, restarts=10))
    assert len(result.runs) == 3
    assert "clamping" in caplog.text
    assert result.alpha == pytest.approx(1.1, abs=1e-10)


def test_kind_mismatch(normal_matrix, damping20):
    with pytest.raises(ValueError):
        run_with_restarts(normal_matrix, FixedPointConfig(eps=0.1), "fp-nep")
    with pytest.raises(ValueError):
        run_with_restarts(damping20, FixedPointConfig(eps=0.1), "fp-matrix")


@pytest.mark.slow
def test_accuracy_does_not_decrease_with_restarts():
    rng = np.random.default_rng(2024)
    sizes = rng.integers(20, 61, 100)
    seeds = rng.integers(0, 10**6, 100)
    matrices = [random_matrix(int(n), seed=int(s)) for n, s in zip(sizes, seeds)]
    eps = 0.5
    exact = [crisscross_matrix(A, eps).alpha for A in matrices]

    fractions = []
    for N in (1, 3, 5, 7):
        cfg = FixedPointConfig(eps=eps, restarts=N)
        hits = [abs(run_with_restarts(A, cfg).alpha - ref) <= 2e-6 for A, ref in zip(matrices, exact)]
        fractions.append(np.mean(hits))
    assert fractions == sorted(fractions)
    assert fractions[0] >= 0.9
    assert fractions[-1] >= 0.99
