# tests/test_acceptance.py
"""Published reference values on the larger problems (run with -m slow)."""
import numpy as np
import pytest

from psa.algorithms.approx import first_order_scores_nep
from psa.algorithms.base_iteration import FixedPointConfig
from psa.algorithms.fixedpoint import fp_matrix, fp_nep, fp_nep_scaled
from psa.algorithms.restarts import run_with_restarts
from psa.oracle.crisscross import crisscross_matrix
from psa.problems.problem_factory import ProblemFactory

pytestmark = pytest.mark.slow


@pytest.mark.parametrize("case", [0, 1])
def test_damping_scale_up(reference_values, case):
    ref = reference_values["damping_scale_up"]
    expected = ref["cases"][case]
    problem = ProblemFactory.create_problem(ref["problem"]).with_weights(expected["weights"])
    result = fp_nep(problem.function, FixedPointConfig(eps=ref["eps"]))
    assert result.converged
    assert result.alpha == pytest.approx(expected["alpha"], abs=expected["tol"])
    assert abs(result.iterations - expected["iterations"]) <= ref["iteration_slack"]
    assert result.rbvt is not None and result.rbvt.is_rbvt


@pytest.mark.parametrize("solver", [fp_nep, fp_nep_scaled])
def test_damping_large_eps(damping20, reference_values, solver):
    ref = reference_values["damping_quadratic"]["cases"][2]
    result = solver(damping20, FixedPointConfig(eps=ref["eps"]))
    assert result.alpha == pytest.approx(ref["alpha"], abs=ref["tol"])
    if result.converged:
        assert result.rbvt is not None and result.rbvt.is_rbvt


def test_scaled_iteration_at_eps_08(damping20, reference_values):
    ref = reference_values["damping_quadratic"]["scaled_only"]
    result = fp_nep_scaled(damping20, FixedPointConfig(eps=ref["eps"]))
    assert result.converged
    assert result.alpha == pytest.approx(ref["alpha"], abs=ref["tol"])
    assert result.iterations <= ref["max_iter"]
    assert result.rbvt is not None and result.rbvt.is_rbvt


@pytest.mark.parametrize("index", [0, 1])
def test_matrix_families(reference_values, index):
    ref = reference_values["matrices"][index]
    A = ProblemFactory.create_problem(ref["problem"]).matrix
    exact = crisscross_matrix(A, ref["eps"])
    assert exact.alpha == pytest.approx(ref["alpha"], abs=ref["tol"])

    result = fp_matrix(A, FixedPointConfig(eps=ref["eps"]))
    assert result.converged
    assert abs(result.alpha - exact.alpha) <= reference_values["fixed_point_vs_crisscross_tol"]
    assert result.rbvt is not None and result.rbvt.is_rbvt


def test_first_order_error_on_damped_chain(reference_values):
    """Error of the first-order estimate against a restarted scaled iteration.

    Without the external damper the error shrinks at least like ε². With a
    damper the rightmost component can switch between two ε values, so only
    the smallest ε is held to the ε² scale.
    """
    ref = reference_values["first_order_error"]
    eps_values = ref["eps"]
    errors = {}
    for nu in ref["nu"]:
        T = ProblemFactory.create_problem(f"{ref['problem']},nu={nu}").function
        row = []
        for eps in eps_values:
            oracle = run_with_restarts(T, FixedPointConfig(eps=eps, restarts=5, init="score"), "fp-nep-scaled")
            row.append(abs(first_order_scores_nep(T, eps).estimate - oracle.alpha))
        errors[nu] = np.array(row)
        assert errors[nu][0] <= ref["small_eps_factor"] * eps_values[0] ** 2

    undamped = errors[0]
    assert np.all(undamped <= np.square(eps_values))
    assert np.all(undamped[1:] / undamped[:-1] >= ref["min_doubling_ratio"])
