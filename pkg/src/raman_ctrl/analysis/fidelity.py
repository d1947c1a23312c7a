"""Ideal subspace gates and the gate/state fidelity measures."""
from __future__ import annotations

import math

import numpy as np

from ..core import CouplingConfig, bright_dark_states

DEFAULT_SEED = 0xC0FFEE

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)


def rotation_gate(xi: float, theta: float) -> np.ndarray:
    """R_xi(theta) = exp(-i theta sigma_xi / 2) with sigma_xi = cos(xi) sx + sin(xi) sy."""
    sigma = math.cos(xi) * SIGMA_X + math.sin(xi) * SIGMA_Y
    return math.cos(theta / 2) * np.eye(2) - 1j * math.sin(theta / 2) * sigma


def projector_gate(coupling: CouplingConfig, theta) -> np.ndarray:
    """e^{-i theta}|b><b| + |d><d| on span{|0>, |1>}; broadcasts over an array of theta."""
    b = bright_dark_states(coupling)[0][:2]
    pb = np.outer(b, b.conj())
    theta = np.asarray(theta, dtype=float)
    return np.eye(2) + (np.exp(-1j * theta)[..., None, None] - 1.0) * pb


def ideal_gate(coupling: CouplingConfig, theta: float) -> np.ndarray:
    """Target 2x2 unitary of a rotation by theta.

    Equal-amplitude couplings give R_xi(theta) with xi the relative phase of
    omega2 to omega1. Otherwise the projector form is returned; the two agree
    up to a global phase e^{-i theta/2}.
    """
    if math.isclose(abs(coupling.omega1), abs(coupling.omega2), rel_tol=1e-12):
        return rotation_gate(coupling.relative_phase, theta)
    return projector_gate(coupling, theta)


def restrict(u: np.ndarray) -> np.ndarray:
    """Block of a 3x3 propagator on span{|0>, |1>}."""
    return np.asarray(u)[..., :2, :2]


def gate_fidelity(u: np.ndarray, u_id: np.ndarray) -> float:
    """F_g = |Tr(U^dag U_id)| / 2 with U restricted to the qubit subspace."""
    ur = restrict(u)
    return float(abs(np.trace(ur.conj().T @ u_id)) / 2)


def state_fidelity(rho_id: np.ndarray, rho: np.ndarray) -> float:
    """F = Tr[rho_id rho]. Kets are promoted to projectors; a 2-component ket is padded with |e>=0."""
    rho_id = _as_density(rho_id)
    rho = _as_density(rho)
    return float(np.real(np.trace(rho_id @ rho)))


def _as_density(x) -> np.ndarray:
    x = np.asarray(x, dtype=complex)
    if x.ndim == 1:
        if x.shape[0] == 2:
            x = np.append(x, 0.0)
        x = np.outer(x, x.conj())
    return x


def haar_qubit_states(n: int, rng: np.random.Generator) -> np.ndarray:
    """n Haar-random kets on a 2-dimensional space, shape (n, 2).

    Polar angle from arccos of a uniform variate, azimuth uniform.
    """
    u1 = rng.random(n)
    u2 = rng.random(n)
    polar = np.arccos(1.0 - 2.0 * u1)
    azimuth = 2.0 * np.pi * u2
    return np.column_stack([np.cos(polar / 2), np.exp(1j * azimuth) * np.sin(polar / 2)])


def paired_state_fidelities(u_r: np.ndarray, u_id: np.ndarray, psis: np.ndarray) -> np.ndarray:
    """|<psi|U_r^dag U_id|psi>|^2 for matching stacks of operators and states (or shared operators)."""
    m = np.swapaxes(u_r.conj(), -1, -2) @ u_id
    amp = np.einsum("...i,...ij,...j->...", psis.conj(), m, psis)
    return np.abs(amp) ** 2


def average_fidelity_over_states(
    u: np.ndarray, u_id: np.ndarray, n_samples: int = 2000, seed=DEFAULT_SEED
) -> float:
    """Mean state fidelity over Haar-random initial states of the qubit subspace."""
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    rng = np.random.default_rng(seed)
    psis = haar_qubit_states(n_samples, rng)
    return float(np.mean(paired_state_fidelities(restrict(u), u_id, psis)))
