import numpy as np
import pytest
from scipy.linalg import expm

import oracles
from thermoq.numerics import (Spectrum, eig, integrate_ode, kron, matmul,
                              partial_trace, solve_or_pinv, unvec, vec)


def test_matmul_matches_triple_loop():
    rng = np.random.default_rng(11)
    for _ in range(20):
        rows, inner, cols = rng.integers(1, 7, size=3)
        a = rng.standard_normal((rows, inner)) + 1j * rng.standard_normal((rows, inner))
        b = rng.standard_normal((inner, cols)) + 1j * rng.standard_normal((inner, cols))
        np.testing.assert_allclose(matmul(a, b), oracles.matmul_reference(a, b),
                                   rtol=0, atol=1e-12)


def test_matmul_rejects_mismatched_shapes():
    with pytest.raises(ValueError):
        matmul(np.eye(2), np.eye(3))


def test_kron_matches_index_construction():
    rng = np.random.default_rng(12)
    for _ in range(10):
        a = rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))
        b = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        np.testing.assert_allclose(kron(a, b), oracles.kron_reference(a, b),
                                   rtol=0, atol=1e-12)


def test_partial_trace_on_product_states():
    rng = np.random.default_rng(13)
    for da, db in ((2, 3), (3, 2), (4, 2)):
        rho_a = oracles.random_density_matrix(rng, da)
        rho_b = oracles.random_density_matrix(rng, db)
        joint = kron(rho_a, rho_b)
        np.testing.assert_allclose(partial_trace(joint, (da, db), keep=0), rho_a,
                                   atol=1e-12)
        np.testing.assert_allclose(partial_trace(joint, (da, db), keep=1), rho_b,
                                   atol=1e-12)


def test_partial_trace_preserves_trace_and_hermiticity():
    rng = np.random.default_rng(14)
    rho = oracles.random_density_matrix(rng, 6)
    for keep, dims in ((0, (2, 3)), (1, (2, 3)), (0, (3, 2))):
        red = partial_trace(rho, dims, keep=keep)
        assert abs(np.trace(red) - 1.0) < 1e-12
        np.testing.assert_allclose(red, red.conj().T, atol=1e-12)


def test_partial_trace_validates_dims():
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), (2, 2), keep=0)
    with pytest.raises(ValueError):
        partial_trace(np.eye(6), (2, 3), keep=2)


def test_eig_residuals():
    rng = np.random.default_rng(15)
    a = rng.standard_normal((5, 5)) + 1j * rng.standard_normal((5, 5))
    spec = eig(a)
    assert isinstance(spec, Spectrum)
    for i in range(5):
        v = spec.eigenvectors[:, i]
        residual = a @ v - spec.eigenvalues[i] * v
        assert np.linalg.norm(residual) < 1e-10 * np.linalg.norm(a)


def test_eig_without_vectors():
    spec = eig(np.diag([1.0, 2.0]), vectors=False)
    assert spec.eigenvectors is None
    assert sorted(spec.eigenvalues.real) == [1.0, 2.0]


def test_solve_or_pinv_well_conditioned():
    rng = np.random.default_rng(16)
    a = rng.standard_normal((4, 4)) + np.eye(4) * 4.0
    b = rng.standard_normal(4)
    np.testing.assert_allclose(solve_or_pinv(a, b), np.linalg.solve(a, b),
                               atol=1e-10)


def test_solve_or_pinv_singular_gives_least_squares():
    a = np.array([[1.0, 0.0], [0.0, 0.0]])
    b = np.array([3.0, 1.0])
    x = solve_or_pinv(a, b)
    np.testing.assert_allclose(x, np.linalg.pinv(a) @ b, atol=1e-10)


def test_integrate_ode_scalar_decay():
    result = integrate_ode(lambda t, y: -y, np.array([1.0 + 0j]), (0.0, 3.0))
    np.testing.assert_allclose(result, [np.exp(-3.0)], rtol=1e-8)


def test_integrate_ode_matrix_against_expm():
    rng = np.random.default_rng(17)
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    a = a - 2.0 * np.eye(3)
    y0 = np.eye(3, dtype=complex)
    result = integrate_ode(lambda t, y: a @ y, y0, (0.0, 1.0))
    np.testing.assert_allclose(result, expm(a), atol=1e-8)


def test_integrate_ode_failure_raises():
    # finite-time blow-up forces the step size under machine spacing
    with pytest.raises(RuntimeError):
        integrate_ode(lambda t, y: y * y, np.array([1.0 + 0j]), (0.0, 2.0))


def test_vec_unvec_roundtrip_and_column_stacking():
    rng = np.random.default_rng(18)
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    np.testing.assert_array_equal(unvec(vec(x)), x)
    # vec(A X B) = (B^T (x) A) vec(X) fixes the stacking convention
    a = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    b = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs = vec(a @ x @ b)
    rhs = oracles.kron_reference(b.T, a) @ vec(x)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


def test_vec_requires_square_for_default_unvec():
    with pytest.raises(ValueError):
        unvec(np.arange(6, dtype=complex))
