# tests/test_linalg.py
import numpy as np
import pytest

from psa.core import linalg
from psa.errors import InputError, KernelError


def test_eig_full_left_and_right_vectors(small_random):
    system = linalg.eig_full(small_random)
    assert len(system) == 6
    for i in range(len(system)):
        mu, x, y = system.triple(i)
        assert np.linalg.norm(small_random @ x - mu * x) < 1e-10
        assert np.linalg.norm(y.conj() @ small_random - mu * y.conj()) < 1e-10
        assert abs(np.linalg.norm(x) - 1) < 1e-12
        assert abs(np.linalg.norm(y) - 1) < 1e-12


def test_min_singular_triple_is_consistent(small_random):
    triple = linalg.min_singular_triple(small_random)
    A = small_random
    assert np.linalg.norm(A @ triple.v - triple.sigma * triple.u) < 1e-10
    assert np.linalg.norm(A.conj().T @ triple.u - triple.sigma * triple.v) < 1e-10
    assert triple.sigma == pytest.approx(np.linalg.svd(A, compute_uv=False)[-1], rel=1e-12)
    assert triple.next_sigma >= triple.sigma
    assert triple.is_simple(1e-8)


def test_singular_triple_gap_of_repeated_value():
    triple = linalg.min_singular_triple(np.eye(3))
    assert triple.gap == pytest.approx(0.0, abs=1e-14)
    assert not triple.is_simple(1e-8)


def test_poly_eig_scalar_quadratic():
    # λ² + 3λ + 2 = (λ + 1)(λ + 2)
    values = linalg.quad_eig([[1.0]], [[3.0]], [[2.0]])
    assert sorted(values.real) == pytest.approx([-2.0, -1.0])
    assert np.allclose(values.imag, 0)


def test_poly_eig_vectors_solve_the_polynomial():
    rng = np.random.default_rng(3)
    M = np.eye(3) + 0.1 * rng.standard_normal((3, 3))
    C = rng.standard_normal((3, 3))
    K = rng.standard_normal((3, 3))
    values, vectors = linalg.poly_eig([K, C, M], vectors=True)
    assert values.size == 6
    for lam, x in zip(values, vectors.T):
        residual = (lam ** 2 * M + lam * C + K) @ x
        assert np.linalg.norm(residual) < 1e-8 * max(1.0, abs(lam) ** 2)


def test_poly_eig_cubic_degree():
    # λ³ − 1 has the three cube roots of unity
    values = linalg.poly_eig([[[-1.0]], [[0.0]], [[0.0]], [[1.0]]])
    assert np.allclose(np.abs(values), 1.0)
    assert np.allclose(sorted(np.angle(values)), [-2 * np.pi / 3, 0.0, 2 * np.pi / 3])


def test_poly_eig_singular_leading_coefficient():
    with pytest.raises(KernelError):
        linalg.quad_eig(np.zeros((2, 2)), np.eye(2), np.eye(2))


def test_poly_eig_needs_degree_one():
    with pytest.raises(InputError):
        linalg.poly_eig([np.eye(2)])


def test_spd_sqrt():
    rng = np.random.default_rng(0)
    B = rng.standard_normal((4, 4))
    S = B @ B.T + 4 * np.eye(4)
    R = linalg.spd_sqrt(S)
    assert np.allclose(R @ R, S, atol=1e-10)
    assert np.allclose(R, R.T)


def test_spd_sqrt_rejects_bad_input():
    with pytest.raises(InputError):
        linalg.spd_sqrt(np.array([[1.0, 2.0], [0.0, 1.0]]))
    with pytest.raises(InputError):
        linalg.spd_sqrt(np.diag([1.0, -1.0]))


def test_rightmost_tie_rules():
    values = np.array([1 + 1j, 1 - 1j, 0.5])
    assert linalg.rightmost(values) == 0
    assert linalg.rightmost(values, "smallest_imag") == 1
    assert linalg.rightmost_value(values) == 1 + 1j


def test_rightmost_ignores_non_finite():
    assert linalg.rightmost_value([np.inf + 0j, -1.0, 2.0]) == 2.0


def test_closest():
    assert linalg.closest([0, 1, 2 + 1j], 1.9 + 0.8j) == 2


def test_as_matrix_validation():
    with pytest.raises(InputError):
        linalg.as_matrix(np.ones((2, 3)))
    with pytest.raises(InputError):
        linalg.as_matrix([[1.0, np.nan], [0.0, 1.0]])
    assert linalg.as_matrix(np.ones((2, 3)), square=False).shape == (2, 3)
    assert linalg.as_matrix(5.0).shape == (1, 1)


def test_align_phase_makes_inner_product_real():
    rng = np.random.default_rng(1)
    ref = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    vec = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    rotated = linalg.align_phase(vec, ref=ref)
    inner = np.vdot(ref, rotated)
    assert abs(inner.imag) < 1e-12
    assert inner.real > 0
    assert np.linalg.norm(rotated) == pytest.approx(np.linalg.norm(vec))
