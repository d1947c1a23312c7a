"""Control schedules for adiabatic elimination, the phase-shift scheme and STIRAP."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Tuple

import numpy as np

from .core import CouplingConfig, TWO_PI, _require_finite

ADDITIVE = "additive"
FOLLOWS_SIGN = "follows_sign"
DETUNING_ERROR_CONVENTIONS = (ADDITIVE, FOLLOWS_SIGN)


@dataclass(frozen=True)
class ControlSegment:
    duration: float
    delta: float
    phi: float = 0.0
    amp_scale: float = 1.0

    def __post_init__(self):
        _require_finite(duration=self.duration, delta=self.delta, phi=self.phi, amp_scale=self.amp_scale)
        if not self.duration > 0:
            raise ValueError(f"segment duration must be positive, got {self.duration}")


@dataclass(frozen=True, eq=False)
class SampledEnvelope:
    """Control values sampled at t_k = k*dt, k = 0..n-1; coupling values are absolute."""

    dt: float
    omega1: np.ndarray
    omega2: np.ndarray
    delta: np.ndarray
    phi: np.ndarray

    def __post_init__(self):
        arrays = {}
        for name, dtype in (("omega1", complex), ("omega2", complex), ("delta", float), ("phi", float)):
            a = np.array(getattr(self, name), dtype=dtype)
            a.flags.writeable = False
            arrays[name] = a
            object.__setattr__(self, name, a)
        n = arrays["omega1"].shape
        if any(a.ndim != 1 or a.shape != n for a in arrays.values()):
            raise ValueError("envelope arrays must be 1-D with equal length")
        if n[0] < 2:
            raise ValueError("sampled envelope needs at least 2 samples")
        if not self.dt > 0:
            raise ValueError("dt must be positive")
        _require_finite(**arrays)

    @property
    def n_samples(self) -> int:
        return self.omega1.shape[0]

    @property
    def times(self) -> np.ndarray:
        return np.arange(self.n_samples) * self.dt

    def __eq__(self, other):
        if not isinstance(other, SampledEnvelope):
            return NotImplemented
        return self.dt == other.dt and all(
            np.array_equal(getattr(self, k), getattr(other, k)) for k in ("omega1", "omega2", "delta", "phi")
        )


@dataclass(frozen=True)
class ControlSchedule:
    """A full time-dependent control: piecewise-constant segments or a sampled envelope."""

    coupling: CouplingConfig
    segments: Tuple[ControlSegment, ...] = ()
    envelope: Optional[SampledEnvelope] = None
    label: str = ""
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple(self.segments))
        if bool(self.segments) == (self.envelope is not None):
            raise ValueError("schedule needs exactly one of segments or envelope")

    @property
    def kind(self) -> str:
        return "piecewise" if self.segments else "sampled"

    @property
    def duration(self) -> float:
        if self.segments:
            return float(math.fsum(s.duration for s in self.segments))
        return (self.envelope.n_samples - 1) * self.envelope.dt

    def segment_bounds(self) -> np.ndarray:
        return np.concatenate([[0.0], np.cumsum([s.duration for s in self.segments])])


@dataclass(frozen=True)
class PhaseShiftParams:
    phi_c: float
    t_c: float
    omega: float


@dataclass(frozen=True)
class ErrorModel:
    """Static amplitude offset delta_omega and detuning offset delta_delta (angular frequency)."""

    delta_omega: float = 0.0
    delta_delta: float = 0.0

    def __post_init__(self):
        _require_finite(delta_omega=self.delta_omega, delta_delta=self.delta_delta)

    @classmethod
    def relative(cls, d_omega_ratio: float, d_delta_ratio: float, omega: float = TWO_PI) -> "ErrorModel":
        return cls(d_omega_ratio * omega, d_delta_ratio * omega)

    @property
    def is_zero(self) -> bool:
        return self.delta_omega == 0.0 and self.delta_delta == 0.0


def generalized_rabi(delta: float, omega_rabi: float) -> float:
    return math.hypot(delta, omega_rabi)


def phase_shift_params(delta: float, coupling: CouplingConfig) -> PhaseShiftParams:
    """Parking phase and time: cos(phi_c) = delta/(delta + omega), t_c = phi_c/omega."""
    _require_finite(delta=delta)
    if delta < 0:
        raise ValueError("the phase-shift construction is defined for delta >= 0")
    om = coupling.omega_norm
    w = generalized_rabi(delta, om)
    phi_c = math.acos(delta / (delta + w))
    return PhaseShiftParams(phi_c=phi_c, t_c=phi_c / w, omega=w)


def _gate_time(delta: float, omega_rabi: float, theta: float) -> float:
    if not theta > 0:
        raise ValueError(f"rotation angle theta must be positive, got {theta}")
    w = generalized_rabi(delta, omega_rabi)
    # w - delta = O^2/(w + delta) avoids cancellation at large detuning
    return 2.0 * theta * (w + delta) / omega_rabi**2


def ae_schedule(delta: float, coupling: CouplingConfig, theta: float) -> ControlSchedule:
    """Constant-phase AE control realizing R(theta) = exp(-i theta |b><b|) on the qubit subspace."""
    _require_finite(delta=delta, theta=theta)
    t = _gate_time(delta, coupling.omega_norm, theta)
    return ControlSchedule(
        coupling,
        segments=(ControlSegment(t, delta, 0.0),),
        label="ae",
        metadata={"delta": delta, "theta": theta},
    )


def ps_schedule(delta: float, coupling: CouplingConfig, theta: float) -> ControlSchedule:
    """Phase-shift control: park in a dressed eigenstate, rotate, then unpark.

    Segments: (t_c, delta, phi=0), (gate time, delta, phi=phi_c), (t_c, -delta, phi=pi).
    """
    _require_finite(delta=delta, theta=theta)
    p = phase_shift_params(delta, coupling)
    t = _gate_time(delta, coupling.omega_norm, theta)
    segments = (
        ControlSegment(p.t_c, delta, 0.0),
        ControlSegment(t, delta, p.phi_c),
        ControlSegment(p.t_c, -delta, math.pi),
    )
    return ControlSchedule(
        coupling,
        segments=segments,
        label="ps",
        metadata={"delta": delta, "theta": theta, "phi_c": p.phi_c, "t_c": p.t_c},
    )


def stirap_envelopes(coupling: CouplingConfig, sigma, t_m, total_time: float, times: np.ndarray):
    """Gaussian pulse pair; the |1>-|e> pulse peaks at T/2 - t_m, before the |0>-|e> pulse.

    `sigma` and `t_m` may be arrays; they broadcast against a trailing time axis.
    """
    sigma = np.asarray(sigma, dtype=float)[..., None]
    t_m = np.asarray(t_m, dtype=float)[..., None]
    half = total_time / 2.0
    g1 = np.exp(-((times - half - t_m) ** 2) / sigma**2)
    g2 = np.exp(-((times - half + t_m) ** 2) / sigma**2)
    return coupling.omega1 * g1, coupling.omega2 * g2


def stirap_schedule(
    coupling: CouplingConfig, sigma: float, t_m: float, total_time: float, n_samples: int = 4000
) -> ControlSchedule:
    """Resonant counterintuitive STIRAP pulses sampled uniformly on [0, total_time]."""
    _require_finite(sigma=sigma, t_m=t_m, total_time=total_time)
    if not sigma > 0:
        raise ValueError("sigma must be positive")
    if not total_time > 0:
        raise ValueError("total_time must be positive")
    if n_samples < 100:
        raise ValueError("n_samples must be at least 100")
    times = np.linspace(0.0, total_time, n_samples)
    o1, o2 = stirap_envelopes(coupling, sigma, t_m, total_time, times)
    env = SampledEnvelope(
        dt=total_time / (n_samples - 1),
        omega1=o1.reshape(-1),
        omega2=o2.reshape(-1),
        delta=np.zeros(n_samples),
        phi=np.zeros(n_samples),
    )
    return ControlSchedule(
        coupling,
        envelope=env,
        label="stirap",
        metadata={"sigma": sigma, "t_m": t_m, "total_time": total_time},
    )


def shifted_detuning(programmed, d_delta: float, convention: str = ADDITIVE):
    """Detuning actually realized when the programmed value carries a static offset.

    ADDITIVE: the offset is a laboratory miscalibration, so -delta becomes -delta + d_delta.
    FOLLOWS_SIGN: the offset flips with the programmed detuning, -delta becomes -(delta + d_delta).
    """
    if convention == ADDITIVE:
        return programmed + d_delta
    if convention == FOLLOWS_SIGN:
        return programmed + np.where(np.asarray(programmed) < 0, -d_delta, d_delta)
    raise ValueError(f"unknown detuning error convention {convention!r}")


def apply_static_errors(
    schedule: ControlSchedule, errors: ErrorModel, convention: str = ADDITIVE
) -> ControlSchedule:
    """Realized schedule under static errors; nominal timings and phases are kept."""
    if errors.is_zero:
        return schedule
    om = schedule.coupling.omega_norm
    factor = (om + errors.delta_omega) / om
    if not factor > 0:
        raise ValueError("amplitude error drives the coupling to zero or below")
    dd = errors.delta_delta
    meta = dict(schedule.metadata, errors={"delta_omega": errors.delta_omega, "delta_delta": dd})
    if schedule.segments:
        segments = tuple(
            replace(s, delta=float(shifted_detuning(s.delta, dd, convention)), amp_scale=s.amp_scale * factor)
            for s in schedule.segments
        )
        return replace(schedule, segments=segments, metadata=meta)
    env = schedule.envelope
    new_env = SampledEnvelope(
        dt=env.dt,
        omega1=env.omega1 * factor,
        omega2=env.omega2 * factor,
        delta=shifted_detuning(env.delta, dd, convention),
        phi=env.phi,
    )
    return replace(schedule, envelope=new_env, metadata=meta)


def scheme_schedule(scheme: str, delta: float, coupling: CouplingConfig, theta: float) -> ControlSchedule:
    if scheme == "ae":
        return ae_schedule(delta, coupling, theta)
    if scheme == "ps":
        return ps_schedule(delta, coupling, theta)
    raise ValueError(f"unknown gate scheme {scheme!r} (expected 'ae' or 'ps')")
