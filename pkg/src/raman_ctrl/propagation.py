"""Unitary and Lindblad evolution under a ControlSchedule, plus an RK4 reference integrator."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.interpolate import CubicSpline

from .core import (
    DIM,
    TWO_PI,
    NumericalInvariantError,
    density_matrix,
    evolve_constant,
    hamiltonian_from_amplitudes,
)
from .schemes import ControlSchedule, ControlSegment

TRACE_TOL = 1e-8
# RK4 keeps the trace of a Lindblad generator exactly, so an unstable step shows up as negative eigenvalues
POSITIVITY_TOL = 1e-6


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control shared by all propagators.

    dt=None picks, per segment, min(2*pi/omega, duration)/steps_per_period where
    omega is the segment's generalized Rabi frequency. Piecewise schedules are
    then refined until at least `min_points` samples span the run.
    """

    dt: Optional[float] = None
    record_stride: int = 1
    min_points: int = 2000
    steps_per_period: int = 200

    def __post_init__(self):
        if self.dt is not None and not self.dt > 0:
            raise ValueError("dt must be positive")
        if self.record_stride < 1:
            raise ValueError("record_stride must be >= 1")


@dataclass(frozen=True, eq=False)
class EvolutionRecord:
    times: np.ndarray
    populations: np.ndarray  # (n, 3): P0, P1, Pe
    coherence_01: np.ndarray
    final_state: np.ndarray
    final_propagator: Optional[np.ndarray] = None
    trace: Optional[np.ndarray] = None
    label: str = ""

    @property
    def pe(self) -> np.ndarray:
        return self.populations[:, 2]

    @property
    def duration(self) -> float:
        return float(self.times[-1])


def _segment_hamiltonian(coupling, seg: ControlSegment) -> np.ndarray:
    s = seg.amp_scale
    return hamiltonian_from_amplitudes(seg.delta, coupling.omega1 * s, coupling.omega2 * s, seg.phi)


def _segment_omega(coupling, seg: ControlSegment) -> float:
    return math.hypot(seg.delta, coupling.omega_norm * seg.amp_scale)


def _default_dt(omega: float, duration: float, cfg: IntegratorConfig) -> float:
    if cfg.dt is not None:
        return cfg.dt
    period = TWO_PI / omega if omega > 0 else duration
    return min(period, duration) / cfg.steps_per_period


def segment_steps(schedule: ControlSchedule, cfg: IntegratorConfig) -> List[int]:
    """Number of sub-steps per segment of a piecewise schedule."""
    counts = []
    for seg in schedule.segments:
        dt = _default_dt(_segment_omega(schedule.coupling, seg), seg.duration, cfg)
        counts.append(max(1, math.ceil(seg.duration / dt - 1e-9)))
    total = sum(counts)
    if total < cfg.min_points:
        boost = math.ceil(cfg.min_points / total)
        counts = [c * boost for c in counts]
    return counts


def _sampled_step_hamiltonians(envelope) -> np.ndarray:
    """Hamiltonians at step midpoints, averaging adjacent samples of the complex drive."""
    d1 = envelope.omega1 * np.exp(1j * envelope.phi)
    d2 = envelope.omega2 * np.exp(1j * envelope.phi)
    mid = lambda a: 0.5 * (a[:-1] + a[1:])  # noqa: E731
    return hamiltonian_from_amplitudes(mid(envelope.delta), mid(d1), mid(d2), 0.0)


def _strided(n: int, stride: int) -> np.ndarray:
    idx = np.arange(0, n, stride)
    if idx[-1] != n - 1:
        idx = np.append(idx, n - 1)
    return idx


def _record_from_kets(times, kets, final_state, u, cfg, label) -> EvolutionRecord:
    idx = _strided(len(times), cfg.record_stride)
    kets = kets[idx]
    pops = np.abs(kets) ** 2
    coh = kets[:, 0] * kets[:, 1].conj()
    return EvolutionRecord(times[idx], pops, coh, final_state, final_propagator=u, label=label)


def propagate_unitary(
    schedule: ControlSchedule, initial: np.ndarray, cfg: Optional[IntegratorConfig] = None
) -> EvolutionRecord:
    """Schrodinger evolution of a pure state.

    Piecewise segments use exact spectral exponentials, subdivided only for
    recording. Sampled envelopes take one exponential of the midpoint
    Hamiltonian per sample interval.
    """
    cfg = cfg or IntegratorConfig()
    psi = np.asarray(initial, dtype=complex)
    if psi.shape != (DIM,) or abs(np.vdot(psi, psi).real - 1.0) > 1e-10:
        raise ValueError("initial state must be a normalized length-3 ket")
    u = np.eye(DIM, dtype=complex)
    times = [np.zeros(1)]
    kets = [psi[None, :]]
    if schedule.segments:
        t0 = 0.0
        for seg, n in zip(schedule.segments, segment_steps(schedule, cfg)):
            w, v = np.linalg.eigh(_segment_hamiltonian(schedule.coupling, seg))
            local = seg.duration * np.arange(1, n + 1) / n
            coeff = v.conj().T @ psi
            states = (np.exp(-1j * np.outer(local, w)) * coeff) @ v.T
            u = (v * np.exp(-1j * w * seg.duration)) @ v.conj().T @ u
            psi = states[-1]
            times.append(t0 + local)
            kets.append(states)
            t0 += seg.duration
        times = np.concatenate(times)
        times[-1] = schedule.duration
    else:
        env = schedule.envelope
        steps = evolve_constant(_sampled_step_hamiltonians(env), env.dt)
        states = np.empty((env.n_samples, DIM), dtype=complex)
        states[0] = psi
        for k, step in enumerate(steps):
            psi = step @ psi
            u = step @ u
            states[k + 1] = psi
        times = env.times
        kets = [states]
    kets = np.concatenate(kets)
    return _record_from_kets(times, kets, psi, u, cfg, schedule.label)


def lindblad_generator(h: np.ndarray, jump_ops) -> np.ndarray:
    """Superoperator G with d vec(rho)/dt = G vec(rho), row-major vectorization."""
    eye = np.eye(DIM)
    g = -1j * (np.kron(h, eye) - np.kron(eye, h.T))
    for op in jump_ops:
        ldl = op.conj().T @ op
        g += np.kron(op, op.conj()) - 0.5 * (np.kron(ldl, eye) + np.kron(eye, ldl.T))
    return g


def decay_operators(gamma: float):
    """sqrt(gamma)|0><e| and sqrt(gamma)|1><e|."""
    ops = []
    for k in (0, 1):
        op = np.zeros((DIM, DIM), dtype=complex)
        op[k, 2] = math.sqrt(gamma)
        ops.append(op)
    return ops


def rk4_step_matrix(generator: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step of y' = G y is the linear map I + hG + (hG)^2/2 + (hG)^3/6 + (hG)^4/24."""
    z = h * generator
    eye = np.eye(z.shape[0], dtype=complex)
    return eye + z @ (eye + z @ (eye / 2 + z @ (eye / 6 + z / 24)))


def propagate_lindblad(
    schedule: ControlSchedule,
    gamma: float,
    initial: np.ndarray,
    cfg: Optional[IntegratorConfig] = None,
) -> EvolutionRecord:
    """Fixed-step RK4 integration of the master equation with decay |e> -> |0>, |1> at rate gamma each."""
    if not gamma >= 0:
        raise ValueError("gamma must be non-negative")
    cfg = cfg or IntegratorConfig()
    rho = np.asarray(initial, dtype=complex)
    if rho.ndim == 1:
        rho = density_matrix(rho)
    if rho.shape != (DIM, DIM):
        raise ValueError("initial state must be a ket or a 3x3 density matrix")
    jumps = decay_operators(gamma) if gamma > 0 else []

    # (generator, step, n_steps, samples per record) blocks in time order
    blocks = []
    if schedule.segments:
        for seg, n in zip(schedule.segments, segment_steps(schedule, cfg)):
            g = lindblad_generator(_segment_hamiltonian(schedule.coupling, seg), jumps)
            blocks.append((g, seg.duration / n, n))
    else:
        env = schedule.envelope
        hs = _sampled_step_hamiltonians(env)
        w_max = float(np.max(np.abs(np.linalg.eigvalsh(hs))) * 2)
        sub = max(1, math.ceil(env.dt / _default_dt(w_max, env.dt, cfg) - 1e-9))
        for h in hs:
            blocks.append((lindblad_generator(h, jumps), env.dt / sub, sub))

    times = [0.0]
    rhos = [rho]
    t = 0.0
    sampled = schedule.envelope is not None
    for g, h, n in blocks:
        step = rk4_step_matrix(g, h)
        v = rho.reshape(-1)
        for k in range(n):
            v = step @ v
            r = v.reshape(DIM, DIM)
            r = 0.5 * (r + r.conj().T)
            v = r.reshape(-1)
            if not sampled:
                times.append(t + (k + 1) * h)
                rhos.append(r)
        rho = v.reshape(DIM, DIM)
        t += n * h
        if sampled:
            times.append(t)
            rhos.append(rho)
    times = np.asarray(times)
    times[-1] = schedule.duration
    rhos = np.asarray(rhos)
    traces = np.real(np.trace(rhos, axis1=1, axis2=2))
    drift = float(np.max(np.abs(traces - 1.0)))
    if drift > TRACE_TOL:
        raise NumericalInvariantError(f"trace drifted by {drift:.3e} (tolerance {TRACE_TOL:.0e})")
    lam_min = float(np.min(np.linalg.eigvalsh(rhos)))
    if lam_min < -POSITIVITY_TOL:
        raise NumericalInvariantError(f"density matrix lost positivity (eigenvalue {lam_min:.3e}); reduce dt")
    final = rho / np.trace(rho).real

    idx = _strided(len(times), cfg.record_stride)
    pops = np.real(np.diagonal(rhos[idx], axis1=1, axis2=2)).copy()
    return EvolutionRecord(
        times[idx], pops, rhos[idx, 0, 1].copy(), final, final_propagator=None, trace=traces[idx], label=schedule.label
    )


def reference_propagator(
    schedule: ControlSchedule,
    cfg: Optional[IntegratorConfig] = None,
    refinement: int = 100,
    substeps: int = 20,
) -> np.ndarray:
    """Brute-force 4th-order Runge-Kutta propagator, used only as an independent check.

    Piecewise segments step at `refinement` times finer than the default
    recording step. Sampled envelopes are interpolated with cubic splines and
    integrated with `substeps` RK4 steps per sample interval.
    """
    cfg = cfg or IntegratorConfig()
    u = np.eye(DIM, dtype=complex)
    if schedule.segments:
        for seg in schedule.segments:
            dt = _default_dt(_segment_omega(schedule.coupling, seg), seg.duration, cfg) / refinement
            n = max(1, math.ceil(seg.duration / dt))
            r = rk4_step_matrix(-1j * _segment_hamiltonian(schedule.coupling, seg), seg.duration / n)
            u = np.linalg.matrix_power(r, n) @ u
        return u

    env = schedule.envelope
    t = env.times
    sp1 = CubicSpline(t, env.omega1 * np.exp(1j * env.phi))
    sp2 = CubicSpline(t, env.omega2 * np.exp(1j * env.phi))
    spd = CubicSpline(t, env.delta)

    def gen(tt):
        return -1j * hamiltonian_from_amplitudes(spd(tt), sp1(tt), sp2(tt), 0.0)

    n = (env.n_samples - 1) * substeps
    h = schedule.duration / n
    grid = np.arange(2 * n + 1) * (h / 2)
    gens = gen(grid)
    for k in range(n):
        a, m, b = gens[2 * k], gens[2 * k + 1], gens[2 * k + 2]
        k1 = a @ u
        k2 = m @ (u + 0.5 * h * k1)
        k3 = m @ (u + 0.5 * h * k2)
        k4 = b @ (u + h * k3)
        u = u + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
    return u
