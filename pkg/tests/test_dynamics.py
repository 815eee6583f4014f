import math

import numpy as np
import pytest

import oracles
from thermoq.bath import SensorParams, bose_occupation, excited_population
from thermoq.dynamics import (MeterSpec, MeterState, alpha, coherence_block,
                              coherence_blocks, coherence_trace, joint_state,
                              lindblad_rhs, meter_state, spin_x_spectrum)
from thermoq.numerics import partial_trace


def params(tau, gamma=1.0):
    return SensorParams(temperature=tau, gamma=gamma)


def test_meter_spec_validation():
    with pytest.raises(ValueError):
        MeterSpec(n=1, lambdas=(0.0,))
    with pytest.raises(ValueError):
        MeterSpec(n=2, lambdas=(1.0, -1.0))  # must be ascending
    with pytest.raises(ValueError):
        MeterSpec(n=2, lambdas=(0.0, math.inf))
    with pytest.raises(ValueError):
        MeterSpec(n=3, lambdas=(0.0, 1.0))  # length mismatch
    spec = MeterSpec(n=2, lambdas=(-1.0, 1.0))
    np.testing.assert_array_equal(spec.lambdas, [-1.0, 1.0])
    # ties are allowed: a flat spectrum is the decoupled meter
    MeterSpec(n=2, lambdas=(0.0, 0.0))


def test_meter_state_validation_and_factories():
    state = MeterState.equal_superposition(3)
    np.testing.assert_allclose(state.coefficients, np.full(3, 1.0 / math.sqrt(3)),
                               rtol=1e-15)
    basis = MeterState.eigenstate(4, 2)
    np.testing.assert_array_equal(basis.coefficients, [0.0, 0.0, 1.0, 0.0])
    with pytest.raises(ValueError):
        MeterState(np.array([0.8, -0.6]))  # negative amplitude
    with pytest.raises(ValueError):
        MeterState(np.array([0.5, 0.5]))  # not normalized
    with pytest.raises(ValueError):
        MeterState.eigenstate(3, 3)


def test_spin_x_spectrum_levels():
    spec = spin_x_spectrum(2, 2.0)
    np.testing.assert_array_equal(spec.lambdas, [-1.0, 1.0])
    spec5 = spin_x_spectrum(5, 1.0)
    diffs = np.diff(spec5.lambdas)
    np.testing.assert_allclose(diffs, np.ones(4), rtol=1e-15)
    assert sum(spec5.lambdas) == pytest.approx(0.0, abs=1e-15)
    with pytest.raises(ValueError):
        spin_x_spectrum(1, 1.0)
    with pytest.raises(ValueError):
        spin_x_spectrum(3, -0.5)


def test_alpha_principal_branch_and_square():
    for n_bar, omega in ((0.01, 0.5), (0.2, 2.0), (1.5, 0.3), (0.0, 2.0)):
        a = alpha(n_bar, omega)
        assert a.real >= 0.0
        target = ((2.0 * n_bar + 1.0)) ** 2 - omega ** 2 + 2j * omega
        assert a * a == pytest.approx(target, rel=1e-12)


def test_coherence_block_initial_condition():
    block = coherence_block(params(0.2), 2.0, 0.0)
    np.testing.assert_allclose(block, np.diag([0.0, 1.0]), atol=1e-15)
    assert coherence_trace(params(0.2), 2.0, 0.0) == pytest.approx(1.0, abs=1e-15)


def test_coherence_block_zero_detuning_is_population_dynamics():
    # with equal level shifts the block obeys the bare relaxation equation,
    # so x tracks p_e and the trace stays exactly 1
    p = params(0.3)
    for t in (0.1, 1.0, 7.0):
        block = coherence_block(p, 0.0, t)
        assert block[0, 0].real == pytest.approx(excited_population(p, t),
                                                 rel=1e-12)
        assert abs(block[0, 0].imag) < 1e-15
        assert coherence_trace(p, 0.0, t) == pytest.approx(1.0, rel=1e-14)


def test_coherence_block_long_time_limits():
    p = params(0.2)
    block = coherence_block(p, 2.0, math.inf)
    np.testing.assert_allclose(block, np.zeros((2, 2)), atol=1e-15)
    cold = SensorParams(temperature=0.001)  # N underflows to exactly 0
    block_cold = coherence_block(cold, 2.0, math.inf)
    np.testing.assert_allclose(block_cold, np.diag([0.0, 1.0]), atol=1e-12)


def test_zero_temperature_coherence_is_exactly_preserved():
    cold = SensorParams(temperature=0.001)  # exp(1/tau) overflows, N == 0
    assert bose_occupation(cold) == 0.0
    for t in np.geomspace(0.01, 100.0, 25):
        assert abs(coherence_trace(cold, 2.0, float(t))) == pytest.approx(
            1.0, abs=1e-12)


def test_coherence_blocks_enumeration():
    meter = spin_x_spectrum(3, 1.0)
    blocks = list(coherence_blocks(params(0.2), meter, 1.0))
    pairs = [(b.m, b.m_prime) for b in blocks]
    assert pairs == [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]
    for b in blocks:
        assert b.block.shape == (2, 2)


def test_joint_state_properties():
    p = params(0.2)
    meter = spin_x_spectrum(3, 2.0)
    psi0 = MeterState.equal_superposition(3)
    rho = joint_state(p, meter, psi0, 5.0)
    assert rho.shape == (6, 6)
    np.testing.assert_array_equal(rho, rho.conj().T)  # exact by construction
    assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)
    assert np.linalg.eigvalsh(rho).min() > -1e-10


def test_joint_state_matches_master_equation():
    rng = np.random.default_rng(31)
    cases = [(2, 0.2, 2.0, 1.0), (3, 0.15, 0.5, 4.0), (4, 0.3, 4.0, 0.5)]
    for n, tau, omega, t in cases:
        p = params(tau)
        meter = spin_x_spectrum(n, omega)
        c = rng.random(n) + 0.1
        c = c / np.linalg.norm(c)
        psi0 = MeterState(c)
        ref = oracles.evolve(oracles.initial_joint_state(c),
                             bose_occupation(p), 1.0, meter.lambdas, t)
        got = joint_state(p, meter, psi0, t)
        assert np.max(np.abs(got - ref)) < 1e-9


def test_joint_state_initial_condition():
    meter = spin_x_spectrum(2, 2.0)
    psi0 = MeterState.equal_superposition(2)
    rho0 = joint_state(params(0.2), meter, psi0, 0.0)
    np.testing.assert_allclose(rho0, oracles.initial_joint_state(psi0.coefficients),
                               atol=1e-15)


def test_meter_state_is_partial_trace_of_joint():
    p = params(0.25)
    meter = spin_x_spectrum(3, 1.5)
    psi0 = MeterState(np.array([0.2, 0.5, np.sqrt(1 - 0.04 - 0.25)]))
    for t in (0.5, 3.0, 40.0):
        joint = joint_state(p, meter, psi0, t)
        reduced = meter_state(p, meter, psi0, t)
        np.testing.assert_allclose(reduced, partial_trace(joint, (3, 2), keep=0),
                                   atol=1e-13)
        np.testing.assert_allclose(reduced, oracles.partial_trace_sensor(joint),
                                   atol=1e-13)


def test_meter_state_populations_never_move():
    p = params(0.2)
    meter = spin_x_spectrum(4, 2.0)
    c = np.array([0.1, 0.3, 0.5, np.sqrt(1 - 0.01 - 0.09 - 0.25)])
    psi0 = MeterState(c)
    for t in (0.0, 2.0, 100.0, math.inf):
        reduced = meter_state(p, meter, psi0, t)
        np.testing.assert_array_equal(np.diag(reduced).real, c * c)


def test_lindblad_rhs_matches_time_derivative():
    p = params(0.2)
    meter = spin_x_spectrum(3, 2.0)
    psi0 = MeterState.equal_superposition(3)
    t, h = 2.0, 1e-6
    fd = (joint_state(p, meter, psi0, t + h)
          - joint_state(p, meter, psi0, t - h)) / (2.0 * h)
    rhs = lindblad_rhs(p, meter, joint_state(p, meter, psi0, t))
    assert np.max(np.abs(fd - rhs)) < 1e-8
    assert abs(np.trace(rhs)) < 1e-14


def test_lindblad_rhs_matches_independent_construction():
    rng = np.random.default_rng(32)
    p = params(0.3)
    meter = spin_x_spectrum(3, 1.0)
    rho = oracles.random_density_matrix(rng, 6)
    got = lindblad_rhs(p, meter, rho)
    ref = oracles.master_rhs(rho, bose_occupation(p), 1.0, meter.lambdas)
    np.testing.assert_allclose(got, ref, atol=1e-13)
    got_h = lindblad_rhs(p, meter, rho, include_sensor_hamiltonian=True)
    ref_h = oracles.master_rhs(rho, bose_occupation(p), 1.0, meter.lambdas,
                               sensor_splitting=p.omega)
    np.testing.assert_allclose(got_h, ref_h, atol=1e-13)


def test_lindblad_rhs_shape_check():
    meter = spin_x_spectrum(2, 1.0)
    with pytest.raises(ValueError):
        lindblad_rhs(params(0.2), meter, np.eye(6))
