# tests/test_matrix_function.py
import numpy as np
import pytest

from psa.core import linalg
from psa.core.matrix_function import MatrixFunction, Perturbation, ScalarFunction, describe, newton_eigenvalue
from psa.errors import InputError


def test_from_matrix_evaluates_shifted_matrix(small_random):
    T = MatrixFunction.from_matrix(small_random)
    z = 0.3 - 1.2j
    assert np.allclose(T.evaluate(z), z * np.eye(6) - small_random)
    assert np.allclose(T.evaluate(z, order=1), np.eye(6))
    assert T.is_matrix_case
    assert T.weights == (0.0, 1.0)


def test_quadratic_value_and_derivative():
    M, C, K = np.diag([1.0, 2.0]), np.array([[0.1, 0.0], [0.0, 0.2]]), np.array([[2.0, -1.0], [-1.0, 2.0]])
    T = MatrixFunction.quadratic(M, C, K)
    z = 0.5 + 2j
    assert np.allclose(T.evaluate(z), z ** 2 * M + z * C + K)
    assert np.allclose(T.evaluate(z, order=1), 2 * z * M + C)
    assert T.degree == 2
    assert not T.is_matrix_case


def test_quadratic_eigenvalues_match_companion(damping20):
    coeffs = damping20.coefficients()
    expected = linalg.quad_eig(coeffs[2], coeffs[1], coeffs[0])
    values = damping20.eigenvalues()
    assert values.size == 40
    assert np.allclose(np.sort_complex(values), np.sort_complex(expected))


def test_weighted_moduli():
    T = MatrixFunction.quadratic(np.eye(2), np.eye(2), np.eye(2), weights=(1.0, 2.0, 0.5))
    z = 1 + 1j
    expected = np.sqrt(abs(z) ** 4 + 4 * abs(z) ** 2 + 0.25)
    assert T.weighted_moduli(np.array([z]))[0] == pytest.approx(expected)


def test_evaluate_batch_matches_pointwise(damping20):
    zs = np.array([0.1 + 7j, -0.2 + 3j, 1.0])
    batch = damping20.evaluate_batch(zs)
    for z, Tz in zip(zs, batch):
        assert np.allclose(Tz, damping20.evaluate(z))


def test_weights_are_validated():
    with pytest.raises(InputError):
        MatrixFunction.quadratic(np.eye(2), np.eye(2), np.eye(2), weights=(1.0, -1.0, 1.0))
    with pytest.raises(InputError):
        MatrixFunction.quadratic(np.eye(2), np.eye(2), np.eye(2), weights=(1.0, 1.0))


def test_evaluate_rejects_non_finite_point(damping20):
    with pytest.raises(InputError):
        damping20.evaluate(complex(np.inf, 0))


def test_user_function_derivative_check():
    good = ScalarFunction.user(np.sin, np.cos)
    assert complex(good(0.5)) == pytest.approx(np.sin(0.5))
    with pytest.raises(InputError):
        ScalarFunction.user(np.sin, np.sin)


def test_scalar_function_flags():
    assert ScalarFunction.constant(1.0).is_one
    assert not ScalarFunction.constant(-1.0).is_one
    assert ScalarFunction.monomial(3).power == 3
    with pytest.raises(InputError):
        ScalarFunction.monomial(-1)


def test_perturbed_adds_weighted_blocks():
    T = MatrixFunction.quadratic(np.eye(2), np.zeros((2, 2)), np.eye(2), weights=(0.0, 2.0, 1.0))
    blocks = [np.ones((2, 2)), np.eye(2), np.array([[0.0, 1.0], [0.0, 0.0]])]
    F = T.perturbed(Perturbation.dense(blocks), scale=0.5)
    assert np.allclose(F.matrices[0], np.eye(2))
    assert np.allclose(F.matrices[1], np.eye(2))
    assert np.allclose(F.matrices[2], np.eye(2) + 0.5 * blocks[2])


def test_rank_one_perturbation_norm_and_blocks():
    u = np.array([1.0, 0.0])
    v = np.array([0.0, 1j])
    pert = Perturbation.rank_one(u, v, [0.6, 0.8])
    assert pert.norm == pytest.approx(1.0)
    assert np.allclose(pert.block(1), 0.8 * np.outer(u, v.conj()))
    assert pert.bilinear(0, u, v) == pytest.approx(0.6)
    assert np.linalg.norm(np.hstack([pert.block(0), pert.block(1)]), 2) == pytest.approx(1.0)


def test_with_constant_shift():
    A = np.diag([1.0, 2.0])
    E = np.array([[0.0, 1.0], [0.0, 0.0]])
    T = MatrixFunction.from_matrix(A).with_constant_shift(E)
    assert T.kappa == 3
    assert T.weights[-1] == 0.0
    assert np.allclose(T.evaluate(1j), 1j * np.eye(2) - A + E)


def test_delay_eigenvalues_solve_the_characteristic_equation():
    T = MatrixFunction.delay(np.array([[-1.0]]), np.array([[0.5]]), tau=1.0)
    values = T.eigenvalues()
    assert values.size >= 1
    for lam in values:
        assert abs(lam + 1.0 - 0.5 * np.exp(-lam)) < 1e-10
    assert not T.is_polynomial


def test_newton_eigenvalue_from_nearby_seed():
    T = MatrixFunction.from_matrix(np.diag([1.0, 3.0]))
    assert newton_eigenvalue(T, 2.8) == pytest.approx(3.0, abs=1e-12)


def test_non_polynomial_without_seeds():
    T = MatrixFunction.from_terms(
        [(ScalarFunction.monomial(1), np.eye(1)), (ScalarFunction.exponential(-1.0), np.eye(1))],
        weights=(0.0, 1.0),
    )
    with pytest.raises(InputError):
        T.eigenvalues()


def test_describe(damping20):
    info = describe(damping20)
    assert info["n"] == 20
    assert info["weights"] == [1.0, 1.0, 1.0]
    assert len(info["terms"]) == 3
