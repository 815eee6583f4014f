import numpy as np
import pytest

import oracles
from thermoq.bath import SensorParams
from thermoq.dynamics import MeterState, joint_state, lindblad_rhs, spin_x_spectrum
from thermoq.numerics import vec
from thermoq.qfi import effective_decay_rate
from thermoq.spectrum import (LiouvillianMatrix, build_superoperator,
                              coherence_eigenvalues_closed_form,
                              null_space_dimension, slow_spectrum,
                              spectral_decomposition_qfi_tail)


def params(tau):
    return SensorParams(temperature=tau)


def test_superoperator_action_matches_rhs():
    rng = np.random.default_rng(51)
    for n, omega in ((2, 2.0), (3, 0.7)):
        p = params(0.2)
        meter = spin_x_spectrum(n, omega)
        for flag in (False, True):
            liou = build_superoperator(p, meter, include_sensor_hamiltonian=flag)
            assert liou.matrix.shape == ((2 * n) ** 2, (2 * n) ** 2)
            rho = oracles.random_density_matrix(rng, 2 * n)
            lhs = liou.matrix @ vec(rho)
            rhs = vec(lindblad_rhs(p, meter, rho, include_sensor_hamiltonian=flag))
            np.testing.assert_allclose(lhs, rhs, atol=1e-13)


def test_slow_spectrum_eigenpairs_and_ordering():
    p = params(0.2)
    liou = build_superoperator(p, spin_x_spectrum(2, 2.0))
    spec = slow_spectrum(liou, 6)
    assert spec.eigenvalues.shape == (6,)
    assert spec.eigenvectors.shape == (16, 6)
    # sorted by descending real part: slowest decay first
    assert np.all(np.diff(spec.eigenvalues.real) <= 1e-12)
    for i in range(6):
        v = spec.eigenvectors[:, i]
        residual = liou.matrix @ v - spec.eigenvalues[i] * v
        assert np.linalg.norm(residual) < 1e-10


def test_slow_spectrum_validates_k():
    liou = build_superoperator(params(0.2), spin_x_spectrum(2, 1.0))
    with pytest.raises(ValueError):
        slow_spectrum(liou, 0)
    with pytest.raises(ValueError):
        slow_spectrum(liou, 17)


def test_slow_spectrum_rejects_growing_modes():
    liou = build_superoperator(params(0.2), spin_x_spectrum(2, 1.0))
    bad = LiouvillianMatrix(matrix=np.eye(16, dtype=complex),
                            params=liou.params, meter=liou.meter)
    with pytest.raises(RuntimeError):
        slow_spectrum(bad, 2)


def test_null_space_dimensions():
    p = params(0.2)
    assert null_space_dimension(build_superoperator(p, spin_x_spectrum(2, 2.0))) == 2
    assert null_space_dimension(build_superoperator(p, spin_x_spectrum(2, 0.0))) == 4
    cold = params(0.001)  # N = 0: coherences stop decaying
    assert null_space_dimension(build_superoperator(cold, spin_x_spectrum(2, 2.0))) == 4


def test_closed_form_pair_matches_numerics():
    p = params(0.2)
    for omega in (0.3, 1.0, 2.0, 4.0):
        liou = build_superoperator(p, spin_x_spectrum(2, omega))
        numeric = slow_spectrum(liou, 4).eigenvalues[2:]  # after the two nulls
        closed = np.array(coherence_eigenvalues_closed_form(p, omega))
        # real parts agree to the last ulp, so order the conjugates by imag
        got = sorted(numeric, key=lambda z: z.imag)
        want = sorted(closed, key=lambda z: z.imag)
        np.testing.assert_allclose(got, want, atol=1e-10)


def test_closed_form_pair_is_conjugate_and_slow():
    p = params(0.2)
    lam1, lam2 = coherence_eigenvalues_closed_form(p, 2.0)
    assert lam1 == lam2.conjugate()
    assert lam1.real < 0
    gamma_n = effective_decay_rate(p, 2.0)
    assert abs(lam1.real + gamma_n) / gamma_n < 0.15


def test_closed_form_pair_zero_coupling():
    lam1, lam2 = coherence_eigenvalues_closed_form(params(0.2), 0.0)
    assert lam1 == 0.0 and lam2 == 0.0


def test_spectral_propagation_matches_closed_form_state():
    p = params(0.2)
    meter = spin_x_spectrum(2, 2.0)
    psi0 = MeterState.equal_superposition(2)
    liou = build_superoperator(p, meter)
    rho0 = joint_state(p, meter, psi0, 0.0)
    for t in (0.5, 5.0, 50.0):
        full = spectral_decomposition_qfi_tail(liou, rho0, t)
        np.testing.assert_allclose(full, joint_state(p, meter, psi0, t),
                                   atol=1e-8)


def test_spectral_tail_truncation_captures_late_time_state():
    p = params(0.2)
    meter = spin_x_spectrum(2, 2.0)
    psi0 = MeterState.equal_superposition(2)
    liou = build_superoperator(p, meter)
    rho0 = joint_state(p, meter, psi0, 0.0)
    t = 200.0  # fast modes decay like exp(-(2N+1) gamma t), long gone here
    kept = spectral_decomposition_qfi_tail(liou, rho0, t, k=2)
    exact = joint_state(p, meter, psi0, t)
    assert np.max(np.abs(kept - exact)) < 1e-10


def test_spectral_propagation_validates_input():
    liou = build_superoperator(params(0.2), spin_x_spectrum(2, 1.0))
    rho0 = np.eye(4, dtype=complex) / 4.0
    with pytest.raises(ValueError):
        spectral_decomposition_qfi_tail(liou, np.eye(3), 1.0)
    with pytest.raises(ValueError):
        spectral_decomposition_qfi_tail(liou, rho0, -1.0)
    with pytest.raises(ValueError):
        spectral_decomposition_qfi_tail(liou, rho0, 1.0, k=-2)
