"""Gate robustness: state-averaged fidelities over static-error grids and random rotation angles."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import partial
from typing import Optional

import numpy as np

from .._parallel import parallel_map
from ..core import TWO_PI, CouplingConfig, basis_state, evolve_constant, hamiltonian_from_amplitudes
from ..propagation import IntegratorConfig, propagate_lindblad, propagate_unitary
from ..schemes import ADDITIVE, ErrorModel, apply_static_errors, scheme_schedule
from .fidelity import (
    DEFAULT_SEED,
    gate_fidelity,
    haar_qubit_states,
    ideal_gate,
    paired_state_fidelities,
    projector_gate,
    restrict,
    state_fidelity,
)


@dataclass(frozen=True)
class SchemeSpec:
    """A gate scheme ('ae' or 'ps') at fixed detuning ratio and coupling."""

    scheme: str
    delta_ratio: float
    omega: float = TWO_PI
    xi: float = 0.0
    convention: str = ADDITIVE

    def __post_init__(self):
        if self.scheme not in ("ae", "ps"):
            raise ValueError(f"scheme must be 'ae' or 'ps', got {self.scheme!r}")

    @property
    def delta(self) -> float:
        return self.delta_ratio * self.omega

    @property
    def coupling(self) -> CouplingConfig:
        return CouplingConfig.symmetric(self.omega, self.xi)

    def schedule(self, theta: float, errors: Optional[ErrorModel] = None):
        s = scheme_schedule(self.scheme, self.delta, self.coupling, theta)
        if errors is not None:
            s = apply_static_errors(s, errors, self.convention)
        return s

    def with_scheme(self, scheme: str) -> "SchemeSpec":
        return SchemeSpec(scheme, self.delta_ratio, self.omega, self.xi, self.convention)


@dataclass(frozen=True)
class FidelityReport:
    scheme: str
    gate_fidelity: float
    state_fidelity: float
    parameters: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class RobustnessGrid:
    axis_delta_omega: np.ndarray  # absolute offsets, rows
    axis_delta_delta: np.ndarray  # absolute offsets, columns
    fidelity: np.ndarray
    omega: float = TWO_PI
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fidelity.shape != (len(self.axis_delta_omega), len(self.axis_delta_delta)):
            raise ValueError("fidelity matrix does not match the axes")

    def center(self) -> float:
        i = int(np.argmin(np.abs(self.axis_delta_omega)))
        j = int(np.argmin(np.abs(self.axis_delta_delta)))
        return float(self.fidelity[i, j])


def gate_propagators(spec: SchemeSpec, thetas, errors: Optional[ErrorModel] = None) -> np.ndarray:
    """Full 3x3 propagators for an array of rotation angles, shape (n, 3, 3).

    Only the rotation segment's length depends on theta, so each segment is
    diagonalized once and exponentiated for all angles together.
    """
    thetas = np.atleast_1d(np.asarray(thetas, dtype=float))
    base = spec.schedule(1.0, errors)
    rot = 0 if spec.scheme == "ae" else 1
    c = base.coupling
    u = np.broadcast_to(np.eye(3, dtype=complex), thetas.shape + (3, 3))
    for i, seg in enumerate(base.segments):
        h = hamiltonian_from_amplitudes(seg.delta, c.omega1 * seg.amp_scale, c.omega2 * seg.amp_scale, seg.phi)
        duration = seg.duration * thetas if i == rot else np.full(thetas.shape, seg.duration)
        u = evolve_constant(h, duration) @ u
    return u


def fidelity_report(
    spec: SchemeSpec,
    theta: float,
    gamma: float = 0.0,
    errors: Optional[ErrorModel] = None,
    initial=None,
    cfg: Optional[IntegratorConfig] = None,
) -> FidelityReport:
    """Gate fidelity of the closed evolution and state fidelity of `initial` (default |0>)."""
    initial = basis_state(0) if initial is None else np.asarray(initial, dtype=complex)
    sched = spec.schedule(theta, errors)
    u_id = ideal_gate(spec.coupling, theta)
    rec = propagate_unitary(sched, initial, cfg)
    target = u_id @ initial[:2]
    if gamma > 0:
        rho = propagate_lindblad(sched, gamma, initial, cfg).final_state
    else:
        rho = rec.final_state
    errors = errors or ErrorModel()
    return FidelityReport(
        scheme=spec.scheme,
        gate_fidelity=gate_fidelity(rec.final_propagator, u_id),
        state_fidelity=state_fidelity(target, rho),
        parameters={
            "delta_ratio": spec.delta_ratio,
            "theta": theta,
            "gamma": gamma,
            "delta_omega": errors.delta_omega,
            "delta_delta": errors.delta_delta,
        },
    )


def sample_thetas(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform draws on (0, 2*pi]."""
    return TWO_PI * (1.0 - rng.random(n))


METRICS = ("gate_fidelity", "state_averaged_fidelity", "final_pe")


def theta_sample_values(
    spec: SchemeSpec,
    errors: Optional[ErrorModel] = None,
    n: int = 10_000,
    seed=DEFAULT_SEED,
    metric: str = "gate_fidelity",
    initial=None,
) -> np.ndarray:
    """Per-sample values behind `mc_average_over_theta`.

    gate_fidelity: F_g of each sampled rotation.
    state_averaged_fidelity: state fidelity of one Haar-random initial state
      per sample, an unbiased estimate of the joint (theta, state) average.
    final_pe: |e> population at the end, starting from `initial` (default |0>).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if metric not in METRICS:
        raise ValueError(f"metric must be one of {METRICS}")
    rng = np.random.default_rng(seed)
    thetas = sample_thetas(n, rng)
    u = gate_propagators(spec, thetas, errors)
    if metric == "final_pe":
        psi = basis_state(0) if initial is None else np.asarray(initial, dtype=complex)
        return np.abs((u @ psi)[:, 2]) ** 2
    u_id = projector_gate(spec.coupling, thetas)
    if metric == "gate_fidelity":
        tr = np.einsum("nji,nji->n", restrict(u).conj(), u_id)
        return np.abs(tr) / 2
    psis = haar_qubit_states(n, rng)
    return paired_state_fidelities(restrict(u), u_id, psis)


def mc_average_over_theta(
    spec: SchemeSpec,
    errors: Optional[ErrorModel] = None,
    n: int = 10_000,
    seed=DEFAULT_SEED,
    metric: str = "gate_fidelity",
    initial=None,
) -> float:
    """Monte Carlo mean of `metric` over rotation angles theta ~ U(0, 2*pi]."""
    return float(np.mean(theta_sample_values(spec, errors, n, seed, metric, initial)))


def default_axis(omega: float = TWO_PI, limit: float = 0.1, points: int = 41) -> np.ndarray:
    return np.linspace(-limit, limit, points) * omega


def _grid_row(i, spec, theta, axis_o, axis_d, n_states, n_theta, seed):
    row = np.empty(len(axis_d))
    for j, dd in enumerate(axis_d):
        errors = ErrorModel(axis_o[i], dd)
        rng = np.random.default_rng((seed, i * len(axis_d) + j))
        if theta is None:
            thetas = sample_thetas(n_theta, rng)
            u = gate_propagators(spec, thetas, errors)
            u_id = projector_gate(spec.coupling, thetas)
            psis = haar_qubit_states(n_theta, rng)
        else:
            u = gate_propagators(spec, [theta], errors)[0]
            u_id = ideal_gate(spec.coupling, theta)
            psis = haar_qubit_states(n_states, rng)
        row[j] = np.mean(paired_state_fidelities(restrict(u), u_id, psis))
    return row


def robustness_grid(
    spec: SchemeSpec,
    theta: Optional[float] = math.pi,
    axis_delta_omega=None,
    axis_delta_delta=None,
    n_states: int = 2000,
    n_theta: int = 10_000,
    seed=DEFAULT_SEED,
    workers=None,
) -> RobustnessGrid:
    """State-averaged gate fidelity over a (delta_omega, delta_delta) grid.

    With theta=None each cell also averages over theta ~ U(0, 2*pi], drawing one
    Haar state per sampled angle. Cell (i, j) seeds its generator with
    (seed, flat index), so schemes share random states cell by cell and the
    result does not depend on the worker count.
    """
    axis_o = default_axis(spec.omega) if axis_delta_omega is None else np.asarray(axis_delta_omega, float)
    axis_d = default_axis(spec.omega) if axis_delta_delta is None else np.asarray(axis_delta_delta, float)
    if axis_o.size == 0 or axis_d.size == 0:
        raise ValueError("robustness axes must be nonempty")
    row = partial(
        _grid_row, spec=spec, theta=theta, axis_o=axis_o, axis_d=axis_d, n_states=n_states, n_theta=n_theta, seed=seed
    )
    fid = np.array(parallel_map(row, range(len(axis_o)), workers))
    meta = {
        "scheme": spec.scheme,
        "delta_ratio": spec.delta_ratio,
        "omega": spec.omega,
        "theta": theta,
        "theta_averaged": theta is None,
        "n_states": n_states if theta is not None else None,
        "n_theta": n_theta if theta is None else None,
        "seed": seed,
        "convention": spec.convention,
    }
    return RobustnessGrid(axis_o, axis_d, fid, spec.omega, meta)
