# tests/test_oracle.py
import numpy as np
import pytest

from psa.core.matrix_function import MatrixFunction
from psa.errors import InputError, OracleError
from psa.oracle.crisscross import crisscross_matrix, horizontal_crossings, vertical_crossings
from psa.oracle.grid import Region, backward_errors, boundary_samples, default_region, grid_psa
from psa.problems.generators import random_matrix
from psa.problems.problem_factory import ProblemFactory


class TestCrissCross:
    def test_normal_matrix(self, normal_matrix):
        result = crisscross_matrix(normal_matrix, 0.1)
        assert result.alpha == pytest.approx(1.1, abs=1e-10)
        assert result.z == pytest.approx(1.1 + 2j, abs=1e-6)
        assert result.method == "crisscross"

    def test_stable_diagonal(self):
        assert crisscross_matrix(np.diag([-1.0, -2.0]), 0.5).alpha == pytest.approx(-0.5, abs=1e-10)

    def test_nonnormal_two_by_two(self):
        A = np.array([[0.0, 10.0], [0.0, 1.0]])
        result = crisscross_matrix(A, 0.01)
        # the first-order prediction 1 + ε·sqrt(101) overshoots by O(ε²)
        assert 1.085 < result.alpha < 1 + 0.01 * np.sqrt(101)
        assert np.linalg.svd(result.z * np.eye(2) - A, compute_uv=False)[-1] == pytest.approx(0.01, rel=1e-6)

    def test_crossings_of_a_disk(self):
        A = np.array([[0.0]])
        assert vertical_crossings(A, 1.0, 0.0) == pytest.approx([-1.0, 1.0])
        assert horizontal_crossings(A, 1.0, 0.0) == pytest.approx([-1.0, 1.0])
        assert horizontal_crossings(A, 1.0, 0.6) == pytest.approx([-0.8, 0.8])

    def test_eps_must_be_positive(self, normal_matrix):
        with pytest.raises(InputError):
            crisscross_matrix(normal_matrix, 0.0)


class TestGrid:
    def test_normal_matrix(self, normal_matrix):
        result = grid_psa(MatrixFunction.from_matrix(normal_matrix), 0.1)
        assert result.alpha == pytest.approx(1.1, abs=1e-6)
        assert result.certified_tol > 0
        assert result.method == "grid"

    @pytest.mark.parametrize("seed", range(4))
    def test_agrees_with_crisscross(self, seed):
        A = random_matrix(5, seed=seed)
        eps = 0.5
        grid = grid_psa(MatrixFunction.from_matrix(A), eps)
        cc = crisscross_matrix(A, eps)
        assert grid.alpha == pytest.approx(cc.alpha, abs=max(grid.certified_tol, 1e-6))

    @pytest.mark.slow
    def test_agrees_with_crisscross_on_many_matrices(self):
        rng = np.random.default_rng(2023)
        eps = 0.5
        for _ in range(100):
            n = int(rng.integers(5, 31))
            A = random_matrix(n, seed=int(rng.integers(1_000_000)))
            T = MatrixFunction.from_matrix(A)
            grid = grid_psa(T, eps, region=default_region(T, eps, grid_n=61))
            cc = crisscross_matrix(A, eps)
            assert abs(grid.alpha - cc.alpha) <= grid.certified_tol + cc.certified_tol * max(1.0, abs(cc.alpha))

    @pytest.mark.slow
    @pytest.mark.parametrize("case", [0, 1, 2])
    def test_finds_thin_rightmost_component(self, reference_values, case):
        ref = reference_values["grid_thin_components"]
        expected = ref["cases"][case]
        T = ProblemFactory.create_problem(expected["problem"]).function
        result = grid_psa(T, expected["eps"])
        assert result.alpha == pytest.approx(expected["alpha"], abs=ref["tol"])

    def test_region_outside_pseudospectrum(self, normal_matrix):
        T = MatrixFunction.from_matrix(normal_matrix)
        with pytest.raises(OracleError):
            grid_psa(T, 0.1, region=Region(5.0, 6.0, 5.0, 6.0, grid_n=21))

    def test_eps_must_be_positive(self, normal_matrix):
        with pytest.raises(InputError):
            grid_psa(MatrixFunction.from_matrix(normal_matrix), -1.0)

    def test_default_region_contains_spectrum(self, damping20):
        region = default_region(damping20, 0.1)
        values = damping20.eigenvalues()
        right = values[np.argmax(values.real)]
        assert region.re_min < right.real < region.re_max
        assert region.im_min < right.imag < region.im_max
        assert region.grid_n == 201

    def test_empty_region_rejected(self):
        with pytest.raises(InputError):
            Region(1.0, 0.0, 0.0, 1.0)

    def test_backward_errors_of_scalar(self):
        T = MatrixFunction.from_matrix(np.array([[0.0]]))
        zs = np.array([[3 + 4j, 1j]])
        assert backward_errors(T, zs) == pytest.approx(np.array([[5.0, 1.0]]))

    @pytest.mark.slow
    def test_damping_reference(self, damping20, reference_values):
        ref = reference_values["damping_quadratic"]["cases"][0]
        region = Region.around(complex(ref["z"]["re"], ref["z"]["im"]), 1.0)
        result = grid_psa(damping20, ref["eps"], region=region)
        assert result.alpha == pytest.approx(ref["alpha"], abs=1e-6)


class TestBoundary:
    def test_unit_circle(self):
        T = MatrixFunction.from_matrix(np.array([[0.0]]))
        samples = boundary_samples(T, 1.0, Region(-2.0, 2.0, -2.0, 2.0, grid_n=41))
        assert len(samples) > 30
        radii = np.array([np.hypot(x, y) for x, y in samples])
        assert np.max(np.abs(radii - 1.0)) <= 1e-8

    def test_region_without_boundary(self):
        T = MatrixFunction.from_matrix(np.array([[0.0]]))
        assert boundary_samples(T, 1.0, Region(5.0, 6.0, 5.0, 6.0, grid_n=11)) == []

    def test_rows_override(self):
        T = MatrixFunction.from_matrix(np.array([[0.0]]))
        samples = boundary_samples(T, 1.0, Region(-2.0, 2.0, -2.0, 2.0, grid_n=5), rows=101)
        xs = sorted({x for x, _ in samples})
        assert all(-1.0 <= x <= 1.0 for x in xs)
