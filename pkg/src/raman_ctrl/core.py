"""Three-level Lambda system: basis, Hamiltonian, bright/dark states, dressed states.

Basis order is fixed everywhere: index 0 is |0>, 1 is |1>, 2 is |e>.
States are plain numpy arrays, a length-3 vector for pure states and a
3x3 matrix for density matrices. Time is dimensionless and all frequencies
are angular.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Tuple

import numpy as np

DIM = 3
TWO_PI = 2.0 * math.pi


class BasisLabel(enum.IntEnum):
    ZERO = 0
    ONE = 1
    EXCITED = 2


class DegenerateCouplingError(ValueError):
    """Raised when both coupling amplitudes vanish."""


class NumericalInvariantError(RuntimeError):
    """A conserved quantity drifted beyond its tolerance."""


def _require_finite(**values) -> None:
    for name, v in values.items():
        if not np.all(np.isfinite(v)):
            raise ValueError(f"{name} must be finite, got {v!r}")


@dataclass(frozen=True)
class CouplingConfig:
    """Complex coupling amplitudes of the |0>-|e> and |1>-|e> fields."""

    omega1: complex
    omega2: complex

    def __post_init__(self):
        object.__setattr__(self, "omega1", complex(self.omega1))
        object.__setattr__(self, "omega2", complex(self.omega2))
        _require_finite(omega1=self.omega1, omega2=self.omega2)
        if self.omega_norm == 0.0:
            raise DegenerateCouplingError("omega1 = omega2 = 0 has no bright state")

    @classmethod
    def symmetric(cls, omega: float = TWO_PI, xi: float = 0.0) -> "CouplingConfig":
        """Equal-amplitude couplings with total strength `omega` and relative phase `xi`."""
        a = omega / math.sqrt(2.0)
        return cls(a, a * np.exp(1j * xi))

    @property
    def omega_norm(self) -> float:
        return math.hypot(abs(self.omega1), abs(self.omega2))

    @property
    def relative_phase(self) -> float:
        """Phase of omega2 relative to omega1 (0 if either vanishes)."""
        if self.omega1 == 0 or self.omega2 == 0:
            return 0.0
        return float(np.angle(self.omega2 / self.omega1))

    def scaled(self, factor: float) -> "CouplingConfig":
        return CouplingConfig(self.omega1 * factor, self.omega2 * factor)

    def bright(self) -> np.ndarray:
        return bright_dark_states(self)[0]

    def dark(self) -> np.ndarray:
        return bright_dark_states(self)[1]


@dataclass(frozen=True)
class DressedSystem:
    """Eigensystem of the frame-rotated Hamiltonian restricted to {|b>, |e>} plus |d>.

    `eigenstates` columns are ordered as |phi_+>, |phi_->, |d>, matching
    `eigenvalues` = (+omega/2, -omega/2, 0).
    """

    delta: float
    omega_rabi: float
    phi: float
    omega: float
    mixing_angle: float
    eigenvalues: np.ndarray
    eigenstates: np.ndarray

    @property
    def phi_plus(self) -> np.ndarray:
        return self.eigenstates[:, 0]

    @property
    def phi_minus(self) -> np.ndarray:
        return self.eigenstates[:, 1]

    @property
    def dark(self) -> np.ndarray:
        return self.eigenstates[:, 2]


def basis_state(label: BasisLabel | int) -> np.ndarray:
    psi = np.zeros(DIM, dtype=complex)
    psi[int(label)] = 1.0
    return psi


def density_matrix(psi: np.ndarray) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    return np.outer(psi, psi.conj())


def bright_dark_states(coupling: CouplingConfig) -> Tuple[np.ndarray, np.ndarray]:
    """Return (|b>, |d>) with |b> = (O1|0> + O2|1>)/O and |d> = (O2*|0> - O1*|1>)/O."""
    om = coupling.omega_norm
    if om == 0.0:
        raise DegenerateCouplingError("zero coupling")
    o1, o2 = coupling.omega1, coupling.omega2
    b = np.array([o1, o2, 0.0], dtype=complex) / om
    d = np.array([o2.conjugate(), -o1.conjugate(), 0.0], dtype=complex) / om
    return b, d


def build_hamiltonian(delta: float, coupling: CouplingConfig, phi: float = 0.0) -> np.ndarray:
    """Rotating-frame Hamiltonian -delta|e><e| + (e^{i phi}/2)(O1|0> + O2|1>)<e| + h.c."""
    _require_finite(delta=delta, phi=phi)
    return hamiltonian_from_amplitudes(delta, coupling.omega1, coupling.omega2, phi)


def hamiltonian_from_amplitudes(delta, omega1, omega2, phi=0.0) -> np.ndarray:
    """Same as `build_hamiltonian` but from raw amplitudes; broadcasts over leading axes.

    Zero couplings are allowed here, which sampled envelopes need at their tails.
    """
    delta = np.asarray(delta, dtype=float)
    drive = np.exp(1j * np.asarray(phi, dtype=float)) / 2.0
    c1 = np.asarray(omega1, dtype=complex) * drive
    c2 = np.asarray(omega2, dtype=complex) * drive
    shape = np.broadcast_shapes(delta.shape, c1.shape, c2.shape)
    h = np.zeros(shape + (DIM, DIM), dtype=complex)
    h[..., 0, 2] = c1
    h[..., 1, 2] = c2
    h[..., 2, 0] = np.conj(c1)
    h[..., 2, 1] = np.conj(c2)
    h[..., 2, 2] = -delta
    return h


def frame_hamiltonian(delta: float, coupling: CouplingConfig, phi: float = 0.0) -> np.ndarray:
    """Hamiltonian in the frame rotating at delta/2 on |b> and |e>.

    (delta/2)(|b><b| - |e><e|) + (O/2)(e^{i phi}|b><e| + h.c.). The dark state is
    untouched by the frame change so it keeps eigenvalue 0.
    """
    b, _ = bright_dark_states(coupling)
    e = basis_state(BasisLabel.EXCITED)
    pb = np.outer(b, b.conj())
    pe = np.outer(e, e.conj())
    be = np.outer(b, e.conj())
    om = coupling.omega_norm
    return 0.5 * delta * (pb - pe) + 0.5 * om * (np.exp(1j * phi) * be + np.exp(-1j * phi) * be.conj().T)


def dressed_eigensystem(delta: float, coupling: CouplingConfig, phi: float = 0.0) -> DressedSystem:
    """Analytic eigenstates of the frame Hamiltonian.

    With tan(theta) = O/delta the eigenvectors in the (|b>, |e>) plane are
    |phi_+> = cos(theta/2)|b> + e^{-i phi} sin(theta/2)|e> and
    |phi_-> = -e^{i phi} sin(theta/2)|b> + cos(theta/2)|e>.
    """
    _require_finite(delta=delta, phi=phi)
    om = coupling.omega_norm
    if om == 0.0:
        raise DegenerateCouplingError("zero coupling")
    w = math.hypot(delta, om)
    theta = math.atan2(om, delta)
    b, d = bright_dark_states(coupling)
    e = basis_state(BasisLabel.EXCITED)
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    plus = c * b + np.exp(-1j * phi) * s * e
    minus = -np.exp(1j * phi) * s * b + c * e
    vecs = np.column_stack([plus, minus, d])
    vals = np.array([w / 2, -w / 2, 0.0])
    return DressedSystem(delta, om, phi, w, theta, vals, vecs)


def evolve_constant(h: np.ndarray, duration: float) -> np.ndarray:
    """exp(-i h duration) via eigendecomposition of the Hermitian matrix `h`.

    Accepts a stack of Hamiltonians with shape (..., 3, 3); `duration` may be a
    scalar or broadcast against the leading axes.
    """
    duration = np.asarray(duration, dtype=float)
    if np.any(duration < 0):
        raise ValueError("duration must be non-negative")
    _require_finite(duration=duration)
    h = np.asarray(h, dtype=complex)
    w, v = np.linalg.eigh(h)
    phases = np.exp(-1j * w * duration[..., None])
    return (v * phases[..., None, :]) @ np.swapaxes(v.conj(), -1, -2)


def populations(state: np.ndarray) -> Tuple[float, float, float]:
    """Basis-state populations (P0, P1, Pe) of a ket or density matrix."""
    state = np.asarray(state)
    if state.ndim == 1:
        p = np.abs(state) ** 2
    elif state.ndim == 2:
        p = np.real(np.diagonal(state))
    else:
        raise ValueError(f"expected a ket or density matrix, got shape {state.shape}")
    return float(p[0]), float(p[1]), float(p[2])


def phase_aligned_distance(a: np.ndarray, b: np.ndarray) -> float:
    """min over global phase c of ||a - c b||, for kets or operators."""
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    ov = np.vdot(b, a)
    c = ov / abs(ov) if abs(ov) > 0 else 1.0
    return float(np.linalg.norm(a - c * b))


def is_unitary(u: np.ndarray, atol: float = 1e-10) -> bool:
    u = np.asarray(u)
    return bool(np.allclose(u.conj().T @ u, np.eye(u.shape[0]), atol=atol, rtol=0))


def check_pure_state(psi: np.ndarray, atol: float = 1e-12) -> np.ndarray:
    psi = np.asarray(psi, dtype=complex)
    if psi.shape != (DIM,):
        raise ValueError(f"pure state must have shape (3,), got {psi.shape}")
    if abs(np.vdot(psi, psi).real - 1.0) > atol:
        raise ValueError("pure state is not normalized")
    return psi


def check_density_matrix(rho: np.ndarray, atol: float = 1e-10) -> np.ndarray:
    rho = np.asarray(rho, dtype=complex)
    if rho.shape != (DIM, DIM):
        raise ValueError(f"density matrix must have shape (3, 3), got {rho.shape}")
    if not np.allclose(rho, rho.conj().T, atol=1e-12, rtol=0):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > atol:
        raise ValueError("density matrix trace is not 1")
    if np.linalg.eigvalsh(rho).min() < -atol:
        raise ValueError("density matrix has negative eigenvalues")
    return rho
