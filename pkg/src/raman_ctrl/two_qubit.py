"""Cavity-mediated two-qubit gate through the single-excitation Lambda mapping.

Two qubits couple to a common cavity mode with strengths g1, g2. In the
subspace {|0_c up down>, |0_c down up>, |1_c down down>} the interaction
Hamiltonian is the three-level Lambda Hamiltonian with omega_k = 2 g_k and
|e> = |1_c down down>. Only that subspace is simulated; |up up> and
|down down> (cavity empty) are passed through unchanged.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np

from .analysis.leakage import LeakageReport, leakage_report
from .core import BasisLabel, CouplingConfig, TWO_PI, basis_state
from .propagation import IntegratorConfig, propagate_unitary
from .schemes import scheme_schedule

TWO_QUBIT_BASIS = ("up,up", "up,down", "down,up", "down,down")
SUBSPACE = (1, 2)  # indices of |up down>, |down up> in the 4x4 basis

EMBEDDING_LABELS: Dict[BasisLabel, str] = {
    BasisLabel.ZERO: "0_c,up,down",
    BasisLabel.ONE: "0_c,down,up",
    BasisLabel.EXCITED: "1_c,down,down",
}


@dataclass(frozen=True)
class CavityQubitParams:
    g1: complex
    g2: complex
    delta: float

    def __post_init__(self):
        object.__setattr__(self, "g1", complex(self.g1))
        object.__setattr__(self, "g2", complex(self.g2))
        if abs(self.g1) ** 2 + abs(self.g2) ** 2 == 0:
            raise ValueError("at least one qubit must couple to the cavity")
        if not np.isfinite(self.delta):
            raise ValueError("delta must be finite")

    @classmethod
    def from_ratio(cls, delta_ratio: float, g1=None, g2=None) -> "CavityQubitParams":
        """Symmetric couplings giving omega = 2 pi, detuning delta_ratio * omega."""
        g = TWO_PI / (2 * np.sqrt(2.0))
        g1 = g if g1 is None else g1
        g2 = g if g2 is None else g2
        om = 2.0 * np.hypot(abs(g1), abs(g2))
        return cls(g1, g2, delta_ratio * om)


@dataclass(frozen=True)
class SingleExcitationEmbedding:
    coupling: CouplingConfig
    labels: Dict[BasisLabel, str]


@dataclass(frozen=True, eq=False)
class TwoQubitGate:
    matrix: np.ndarray
    leakage: LeakageReport
    subspace_unitary: np.ndarray
    scheme: str
    theta: float

    def as_dict(self) -> dict:
        return {
            "basis": list(TWO_QUBIT_BASIS),
            "scheme": self.scheme,
            "theta": self.theta,
            "matrix": [[[float(z.real), float(z.imag)] for z in row] for row in self.matrix],
            "leakage": self.leakage.as_dict(),
        }


def embed_single_excitation(params: CavityQubitParams) -> SingleExcitationEmbedding:
    """Lambda-model coupling omega_k = 2 g_k, so omega = 2 sqrt(|g1|^2 + |g2|^2)."""
    return SingleExcitationEmbedding(CouplingConfig(2 * params.g1, 2 * params.g2), dict(EMBEDDING_LABELS))


def bright_pair_state(params: CavityQubitParams) -> np.ndarray:
    """|b'> = (2/omega)(g1|up down> + g2|down up>) in the 4x4 basis."""
    om = 2.0 * np.hypot(abs(params.g1), abs(params.g2))
    v = np.zeros(4, dtype=complex)
    v[SUBSPACE[0]] = 2 * params.g1 / om
    v[SUBSPACE[1]] = 2 * params.g2 / om
    return v


def dark_pair_state(params: CavityQubitParams) -> np.ndarray:
    om = 2.0 * np.hypot(abs(params.g1), abs(params.g2))
    v = np.zeros(4, dtype=complex)
    v[SUBSPACE[0]] = 2 * np.conj(params.g2) / om
    v[SUBSPACE[1]] = -2 * np.conj(params.g1) / om
    return v


def lift_subspace(u2: np.ndarray) -> np.ndarray:
    """4x4 operator acting as `u2` on span{|up down>, |down up>} and identity elsewhere."""
    u = np.eye(4, dtype=complex)
    u[np.ix_(SUBSPACE, SUBSPACE)] = u2
    return u


def synthesize_two_qubit_gate(
    params: CavityQubitParams,
    theta: float,
    scheme: str = "ps",
    initial: BasisLabel = BasisLabel.ZERO,
    cfg: Optional[IntegratorConfig] = None,
) -> TwoQubitGate:
    """Run `scheme` in the embedded Lambda model and lift the achieved block to 4x4.

    The leakage report follows the cavity-excited population starting from
    `initial` (a single-excitation qubit state). With residual cavity
    excitation the lifted matrix is not unitary.
    """
    emb = embed_single_excitation(params)
    if theta == 0:
        zero = LeakageReport(0.0, 0.0, 0.0)
        return TwoQubitGate(np.eye(4, dtype=complex), zero, np.eye(2, dtype=complex), scheme, 0.0)
    sched = scheme_schedule(scheme, params.delta, emb.coupling, theta)
    rec = propagate_unitary(sched, basis_state(initial), cfg)
    block = rec.final_propagator[:2, :2]
    return TwoQubitGate(lift_subspace(block), leakage_report(rec), block, scheme, theta)
