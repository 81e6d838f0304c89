# tests/test_fixedpoint.py
import numpy as np
import pytest
from pydantic import ValidationError

from psa.algorithms.algorithm_factory import AlgorithmFactory
from psa.algorithms.base_iteration import BaseFixedPoint, FixedPointConfig
from psa.algorithms.fixedpoint import FpMatrix, fp_matrix, fp_nep, fp_nep_const, fp_nep_scaled
from psa.core import linalg, nep
from psa.core.matrix_function import MatrixFunction, ScalarFunction
from psa.errors import InputError
from psa.problems.generators import random_matrix


class TestConfig:
    def test_defaults(self):
        cfg = FixedPointConfig(eps=0.1)
        assert cfg.tol == 1e-8
        assert cfg.max_iter == 300
        assert cfg.restarts == 1
        assert cfg.effective_inner_tol == pytest.approx(1e-9)

    def test_rejects_bad_values(self):
        with pytest.raises(ValidationError):
            FixedPointConfig(eps=-0.1)
        with pytest.raises(ValidationError):
            FixedPointConfig(eps=0.1, init="middle")
        with pytest.raises(ValidationError):
            FixedPointConfig(eps=0.1, termination="never")
        with pytest.raises(ValidationError):
            FixedPointConfig(eps=0.1, restarts=0)


class TestDampingReference:
    """Damped chain n=20, ξ=0.005, k=25 with weights (1, 1, 1)."""

    def test_largest_imag_start(self, damping20, reference_values):
        ref = reference_values["damping_quadratic"]["largest_imag_eigenvalue"]
        values = damping20.eigenvalues()
        z0 = values[np.argmax(values.imag)]
        assert z0 == pytest.approx(complex(ref["re"], ref["im"]), abs=ref["tol"])

    @pytest.mark.parametrize("case", [0, 1])
    def test_fp_nep(self, damping20, reference_values, case):
        ref = reference_values["damping_quadratic"]["cases"][case]
        result = fp_nep(damping20, FixedPointConfig(eps=ref["eps"]))
        assert result.converged
        assert result.z == pytest.approx(complex(ref["z"]["re"], ref["z"]["im"]), abs=ref["tol"])
        assert result.iterations <= ref["max_iter"]["fp-nep"]
        assert result.rbvt is not None and result.rbvt.is_rbvt

    @pytest.mark.parametrize("case", [0, 1])
    def test_fp_nep_scaled(self, damping20, reference_values, case):
        ref = reference_values["damping_quadratic"]["cases"][case]
        result = fp_nep_scaled(damping20, FixedPointConfig(eps=ref["eps"]))
        assert result.converged
        assert result.z == pytest.approx(complex(ref["z"]["re"], ref["z"]["im"]), abs=ref["tol"])
        assert result.iterations <= ref["max_iter"]["fp-nep-scaled"]
        assert result.rbvt is not None and result.rbvt.is_rbvt

    def test_converged_point_is_on_the_boundary(self, damping20):
        eps = 0.1
        result = fp_nep(damping20, FixedPointConfig(eps=eps))
        assert nep.backward_error_value(damping20, result.z) == pytest.approx(eps, rel=1e-6)

    def test_iteration_limit(self, damping20):
        result = fp_nep(damping20, FixedPointConfig(eps=0.1, max_iter=1))
        assert result.status == "max_iter"
        assert result.iterations == 1
        assert "1 iterations" in result.trace.message

    def test_zero_eps_returns_rightmost_eigenvalue(self, damping20):
        result = fp_nep(damping20, FixedPointConfig(eps=0.0))
        assert result.converged
        assert result.alpha == pytest.approx(damping20.eigenvalues().real.max(), abs=1e-10)

    def test_inner_loop_failure_is_reported(self, damping20):
        result = fp_nep_scaled(damping20, FixedPointConfig(eps=0.1, inner_max=1))
        assert result.status == "failed"
        assert "inner steps" in result.trace.message

    def test_trace_records_directions(self, damping20):
        result = fp_nep(damping20, FixedPointConfig(eps=0.1))
        trace = result.trace
        assert len(trace.values) == len(trace.iterates)
        assert len(trace.directions) == trace.iterations
        assert all(d.inner.real < 0 and abs(d.inner.imag) < 1e-12 for d in trace.directions)


class TestMatrixIteration:
    def test_normal_matrix_is_exact(self, normal_matrix):
        result = fp_matrix(normal_matrix, FixedPointConfig(eps=0.1))
        assert result.converged
        assert result.alpha == pytest.approx(1.1, abs=1e-10)
        assert result.algorithm == "fp-matrix"

    @pytest.mark.parametrize("init", ["first", "second", "hybrid"])
    def test_init_strategies(self, small_random, init):
        result = fp_matrix(small_random, FixedPointConfig(eps=0.1, init=init))
        assert result.status in ("converged", "max_iter", "stagnated")
        assert linalg.singular_values(result.z * np.eye(6) - small_random)[-1] <= 0.1 * (1 + 1e-8)

    def test_nep_init_rejected(self, small_random):
        result = fp_matrix(small_random, FixedPointConfig(eps=0.1, init="largest_imag"))
        assert result.status == "failed"

    @pytest.mark.parametrize(
        "seed", [*range(5), *(pytest.param(s, marks=pytest.mark.slow) for s in range(5, 20))]
    )
    def test_matches_nep_iteration_on_shifted_matrix(self, seed):
        A = random_matrix(6, seed=seed)
        cfg = FixedPointConfig(eps=0.2, termination="absolute_complex", max_iter=50)
        z0 = linalg.rightmost_value(linalg.eigvals(A))
        matrix_run = fp_matrix(A, cfg, z0=z0)
        nep_run = fp_nep(MatrixFunction.from_matrix(A), cfg, z0=z0)
        assert len(matrix_run.trace.iterates) == len(nep_run.trace.iterates)
        assert np.allclose(matrix_run.trace.iterates, nep_run.trace.iterates, rtol=0, atol=1e-10)


class TestConstantPerturbations:
    def test_requires_constant_last_block(self, damping20):
        with pytest.raises(InputError):
            fp_nep_const(damping20, FixedPointConfig(eps=0.1))

    def test_matches_matrix_iteration(self, normal_matrix):
        # λI + (−A)·1 with only the constant block perturbed
        T = MatrixFunction.from_terms(
            [(ScalarFunction.monomial(1), np.eye(3)), (ScalarFunction.constant(1.0), -normal_matrix)],
            weights=(0.0, 1.0),
        )
        result = fp_nep_const(T, FixedPointConfig(eps=0.1))
        assert result.converged
        assert result.alpha == pytest.approx(1.1, abs=1e-10)


def test_stagnation_detects_two_cycles():
    it = FpMatrix(np.eye(2), FixedPointConfig(eps=0.1, stagnation_window=4))
    cycle = [0.0, 1.0] * 4
    assert it.stagnated([complex(z) for z in cycle])
    converging = [1.0 / (k + 1) for k in range(8)]
    assert not it.stagnated([complex(z) for z in converging])
    assert not it.stagnated([0j, 1 + 0j])


class TestFactory:
    def test_creates_registered_algorithms(self, normal_matrix, damping20):
        cfg = FixedPointConfig(eps=0.1)
        assert AlgorithmFactory.create_algorithm("fp-matrix", normal_matrix, cfg).name == "fp-matrix"
        assert AlgorithmFactory.create_algorithm(" FP-NEP ", damping20, cfg).name == "fp-nep"
        assert set(AlgorithmFactory.get_available_types()) >= {"fp-nep", "fp-nep-const", "fp-nep-scaled", "fp-matrix"}

    def test_unknown_algorithm(self, normal_matrix):
        with pytest.raises(ValueError):
            AlgorithmFactory.create_algorithm("fp-unknown", normal_matrix, FixedPointConfig(eps=0.1))

    def test_register_requires_base_class(self):
        with pytest.raises(ValueError):
            AlgorithmFactory.register_algorithm("bogus", dict)

    def test_is_matrix_algorithm(self):
        assert AlgorithmFactory.is_matrix_algorithm("fp-matrix")
        assert not AlgorithmFactory.is_matrix_algorithm("fp-nep")

    def test_summary(self, normal_matrix):
        result = fp_matrix(normal_matrix, FixedPointConfig(eps=0.1))
        summary = result.summary()
        assert summary["status"] == "converged"
        assert summary["rbvt"] == "rbvt"
        assert issubclass(FpMatrix, BaseFixedPoint)
