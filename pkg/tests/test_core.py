import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import expm

from raman_ctrl.core import (
    TWO_PI,
    BasisLabel,
    CouplingConfig,
    DegenerateCouplingError,
    basis_state,
    bright_dark_states,
    build_hamiltonian,
    check_density_matrix,
    check_pure_state,
    density_matrix,
    dressed_eigensystem,
    evolve_constant,
    frame_hamiltonian,
    hamiltonian_from_amplitudes,
    is_unitary,
    phase_aligned_distance,
    populations,
)

finite = st.floats(-50, 50, allow_nan=False)
amp = st.complex_numbers(max_magnitude=20, allow_nan=False, allow_infinity=False)


def _coupling(o1, o2):
    if abs(o1) ** 2 + abs(o2) ** 2 < 1e-6:
        o1 = 1.0
    return CouplingConfig(o1, o2)


def test_hamiltonian_entries():
    c = CouplingConfig(1.0 + 2.0j, 0.5)
    h = build_hamiltonian(3.0, c, phi=0.7)
    ph = np.exp(0.7j)
    expected = np.array(
        [
            [0, 0, ph * (1 + 2j) / 2],
            [0, 0, ph * 0.5 / 2],
            [np.conj(ph * (1 + 2j)) / 2, np.conj(ph * 0.5) / 2, -3.0],
        ]
    )
    np.testing.assert_allclose(h, expected, atol=1e-15)


@given(finite, amp, amp, finite)
def test_hamiltonian_hermitian(delta, o1, o2, phi):
    h = build_hamiltonian(delta, _coupling(o1, o2), phi)
    np.testing.assert_allclose(h, h.conj().T, atol=0)


def test_broadcast_amplitudes():
    o1 = np.linspace(0, 1, 5)
    hs = hamiltonian_from_amplitudes(2.0, o1, 0.3 * o1, 0.1)
    assert hs.shape == (5, 3, 3)
    np.testing.assert_allclose(hs[3], build_hamiltonian(2.0, CouplingConfig(o1[3], 0.3 * o1[3]), 0.1))


def test_zero_coupling_rejected():
    with pytest.raises(DegenerateCouplingError):
        CouplingConfig(0.0, 0.0)
    with pytest.raises(ValueError):
        CouplingConfig(float("nan"), 1.0)


def test_symmetric_coupling():
    c = CouplingConfig.symmetric(TWO_PI, xi=0.4)
    assert c.omega_norm == pytest.approx(TWO_PI)
    assert abs(c.omega1) == pytest.approx(abs(c.omega2))
    assert c.relative_phase == pytest.approx(0.4)


@given(amp, amp, finite, finite)
def test_bright_dark_orthonormal_and_dark_stationary(o1, o2, delta, phi):
    c = _coupling(o1, o2)
    b, d = bright_dark_states(c)
    assert abs(np.vdot(b, b) - 1) < 1e-12
    assert abs(np.vdot(d, d) - 1) < 1e-12
    assert abs(np.vdot(b, d)) < 1e-12
    h = build_hamiltonian(delta, c, phi)
    # dark state is an exact zero-energy eigenstate
    assert np.linalg.norm(h @ d) < 1e-12 * max(1.0, c.omega_norm)


def test_frame_hamiltonian_spectrum():
    c = CouplingConfig(1.3, 0.4j)
    delta, phi = 2.2, 0.9
    hf = frame_hamiltonian(delta, c, phi)
    w = math.hypot(delta, c.omega_norm)
    np.testing.assert_allclose(np.sort(np.linalg.eigvalsh(hf)), [-w / 2, 0.0, w / 2], atol=1e-12)


@given(st.floats(-30, 30), st.floats(0.1, 20), st.floats(-math.pi, math.pi), st.floats(-math.pi, math.pi))
def test_dressed_states_are_eigenstates(delta, om, phi, xi):
    c = CouplingConfig.symmetric(om, xi)
    ds = dressed_eigensystem(delta, c, phi)
    hf = frame_hamiltonian(delta, c, phi)
    for k in range(3):
        v = ds.eigenstates[:, k]
        assert np.linalg.norm(hf @ v - ds.eigenvalues[k] * v) < 1e-10 * max(1.0, ds.omega)
    assert is_unitary(ds.eigenstates)
    assert ds.omega == pytest.approx(math.hypot(delta, om))
    assert ds.mixing_angle == pytest.approx(math.atan2(om, delta))


@settings(max_examples=60)
@given(finite, amp, amp, finite, st.floats(0, 5))
def test_evolve_constant_matches_expm(delta, o1, o2, phi, t):
    h = build_hamiltonian(delta, _coupling(o1, o2), phi)
    u = evolve_constant(h, t)
    np.testing.assert_allclose(u, expm(-1j * h * t), atol=1e-9)
    assert is_unitary(u, atol=1e-10)


def test_evolve_constant_broadcasts_durations():
    h = build_hamiltonian(1.0, CouplingConfig(1.0, 2.0))
    ts = np.array([0.0, 0.5, 1.0])
    us = evolve_constant(h, ts)
    assert us.shape == (3, 3, 3)
    np.testing.assert_allclose(us[0], np.eye(3), atol=1e-14)
    np.testing.assert_allclose(us[2], expm(-1j * h), atol=1e-12)


def test_negative_duration_rejected():
    with pytest.raises(ValueError):
        evolve_constant(np.eye(3), -1.0)


def test_populations_ket_and_density():
    psi = np.array([0.6, 0.8j, 0.0])
    assert populations(psi) == pytest.approx((0.36, 0.64, 0.0))
    assert populations(density_matrix(psi)) == pytest.approx((0.36, 0.64, 0.0))


def test_basis_and_labels():
    assert basis_state(BasisLabel.EXCITED)[2] == 1
    assert int(BasisLabel.ONE) == 1


def test_phase_aligned_distance_ignores_global_phase():
    a = np.array([1, 1j, 0]) / math.sqrt(2)
    assert phase_aligned_distance(a, np.exp(0.3j) * a) < 1e-14
    assert phase_aligned_distance(a, basis_state(2)) > 1


def test_state_checks():
    with pytest.raises(ValueError):
        check_pure_state(np.array([1.0, 1.0, 0.0]))
    with pytest.raises(ValueError):
        check_density_matrix(np.diag([0.5, 0.6, 0.0]))
    check_density_matrix(density_matrix(basis_state(0)))
