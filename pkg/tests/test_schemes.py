import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from raman_ctrl.core import TWO_PI, CouplingConfig, build_hamiltonian
from raman_ctrl.schemes import (
    ADDITIVE,
    FOLLOWS_SIGN,
    ControlSchedule,
    ControlSegment,
    ErrorModel,
    SampledEnvelope,
    ae_schedule,
    apply_static_errors,
    phase_shift_params,
    ps_schedule,
    scheme_schedule,
    shifted_detuning,
    stirap_envelopes,
    stirap_schedule,
)

SYM = CouplingConfig.symmetric()


def test_phase_shift_params_closed_form():
    # delta = 0: omega = O, cos(phi_c) = 0
    p = phase_shift_params(0.0, SYM)
    assert p.phi_c == pytest.approx(math.pi / 2)
    assert p.t_c == pytest.approx(math.pi / 2 / TWO_PI)
    # delta = 3/4 O: omega = 5/4 O, cos(phi_c) = 3/8
    p = phase_shift_params(0.75 * TWO_PI, SYM)
    assert math.cos(p.phi_c) == pytest.approx(3 / 8)
    assert p.omega == pytest.approx(1.25 * TWO_PI)


def test_negative_detuning_rejected():
    with pytest.raises(ValueError):
        phase_shift_params(-1.0, SYM)


@given(st.floats(0.0, 60.0), st.floats(0.2, 10.0), st.floats(-math.pi, math.pi))
def test_parking_lands_on_eigenstate(ratio, om, xi):
    """After t_c from |b>, the state is an eigenvector of H(delta, phi_c)."""
    c = CouplingConfig.symmetric(om, xi)
    delta = ratio * om
    p = phase_shift_params(delta, c)
    b = c.bright()
    psi = expm(-1j * build_hamiltonian(delta, c, 0.0) * p.t_c) @ b
    _, vecs = np.linalg.eigh(build_hamiltonian(delta, c, p.phi_c))
    overlap = np.max(np.abs(vecs.conj().T @ psi) ** 2)
    assert overlap >= 1 - 1e-10


def test_gate_times():
    d = 3 * TWO_PI
    w = math.hypot(d, TWO_PI)
    ae = ae_schedule(d, SYM, math.pi)
    assert ae.duration == pytest.approx(2 * math.pi / (w - d), rel=1e-12)
    ps = ps_schedule(d, SYM, math.pi / 2)
    p = phase_shift_params(d, SYM)
    assert ps.duration == pytest.approx(math.pi / (w - d) + 2 * p.t_c, rel=1e-12)
    segs = ps.segments
    assert [s.phi for s in segs] == [0.0, p.phi_c, math.pi]
    assert [s.delta for s in segs] == [d, d, -d]
    assert ps.metadata["phi_c"] == p.phi_c


def test_gate_time_large_detuning_has_no_cancellation():
    d = 1e6 * TWO_PI
    t = ae_schedule(d, SYM, math.pi).duration
    assert t == pytest.approx(2 * math.pi * 2 * d / TWO_PI**2, rel=1e-9)


def test_invalid_theta_rejected():
    for theta in (0.0, -1.0):
        with pytest.raises(ValueError):
            ps_schedule(TWO_PI, SYM, theta)
    with pytest.raises(ValueError):
        scheme_schedule("stirap", 1.0, SYM, math.pi)


def test_segment_validation():
    with pytest.raises(ValueError):
        ControlSegment(0.0, 1.0)
    with pytest.raises(ValueError):
        ControlSegment(1.0, float("inf"))
    with pytest.raises(ValueError):
        ControlSchedule(SYM)
    env = SampledEnvelope(0.1, np.ones(3), np.ones(3), np.zeros(3), np.zeros(3))
    with pytest.raises(ValueError):
        ControlSchedule(SYM, segments=(ControlSegment(1.0, 0.0),), envelope=env)
    with pytest.raises(ValueError):
        SampledEnvelope(0.1, np.ones(3), np.ones(2), np.zeros(3), np.zeros(3))


def test_envelope_is_read_only():
    env = SampledEnvelope(0.5, np.ones(4), np.ones(4), np.zeros(4), np.zeros(4))
    with pytest.raises(ValueError):
        env.delta[0] = 1.0
    np.testing.assert_allclose(env.times, [0, 0.5, 1.0, 1.5])


def test_stirap_counterintuitive_order():
    T = 10.0
    sched = stirap_schedule(SYM, 1.0, 2.0, T, n_samples=1001)
    env = sched.envelope
    t = env.times
    # the |1>-|e> pulse (omega2) peaks first, at T/2 - t_m
    assert t[np.argmax(abs(env.omega2))] == pytest.approx(3.0)
    assert t[np.argmax(abs(env.omega1))] == pytest.approx(7.0)
    assert np.max(abs(env.omega1)) == pytest.approx(TWO_PI / math.sqrt(2))
    assert sched.duration == pytest.approx(T)


def test_stirap_envelopes_broadcast():
    t = np.linspace(0, 5, 11)
    o1, o2 = stirap_envelopes(SYM, np.array([1.0, 2.0]), np.array([0.5, 0.1]), 5.0, t)
    assert o1.shape == (2, 11)
    single, _ = stirap_envelopes(SYM, 2.0, 0.1, 5.0, t)
    np.testing.assert_allclose(o1[1], single.ravel())


def test_shifted_detuning_conventions():
    prog = np.array([2.0, 2.0, -2.0])
    np.testing.assert_allclose(shifted_detuning(prog, 0.1, ADDITIVE), [2.1, 2.1, -1.9])
    np.testing.assert_allclose(shifted_detuning(prog, 0.1, FOLLOWS_SIGN), [2.1, 2.1, -2.1])
    with pytest.raises(ValueError):
        shifted_detuning(prog, 0.1, "bogus")


def test_apply_static_errors():
    sched = ps_schedule(2 * TWO_PI, SYM, math.pi)
    assert apply_static_errors(sched, ErrorModel()) is sched
    err = ErrorModel.relative(0.05, -0.02)
    out = apply_static_errors(sched, err)
    for s0, s1 in zip(sched.segments, out.segments):
        assert s1.duration == s0.duration
        assert s1.phi == s0.phi
        assert s1.amp_scale == pytest.approx(1.05)
        assert s1.delta == pytest.approx(s0.delta - 0.02 * TWO_PI)
    with pytest.raises(ValueError):
        apply_static_errors(sched, ErrorModel(-TWO_PI, 0.0))


def test_apply_static_errors_sampled():
    sched = stirap_schedule(SYM, 1.0, 0.5, 4.0, n_samples=200)
    out = apply_static_errors(sched, ErrorModel(0.1 * TWO_PI, 0.3))
    np.testing.assert_allclose(out.envelope.omega1, 1.1 * sched.envelope.omega1)
    np.testing.assert_allclose(out.envelope.delta, 0.3)
