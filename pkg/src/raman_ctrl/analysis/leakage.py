"""Leakage statistics and the perturbative leakage predictors."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from ..propagation import EvolutionRecord


@dataclass(frozen=True)
class LeakageReport:
    average_pe: float
    max_pe: float
    final_pe: float

    def as_dict(self) -> dict:
        return {"average_pe": self.average_pe, "max_pe": self.max_pe, "final_pe": self.final_pe}


def time_average(times: np.ndarray, values: np.ndarray) -> float:
    span = times[-1] - times[0]
    return float(trapezoid(values, times) / span)


def leakage_report(record: EvolutionRecord) -> LeakageReport:
    """Trapezoidal time average, grid maximum and final value of the |e> population."""
    if len(record.times) < 2:
        raise ValueError("record needs at least two time points")
    # roundoff can push a zero population a hair below 0
    pe = np.clip(record.pe, 0.0, None)
    return LeakageReport(
        average_pe=time_average(record.times, pe),
        max_pe=float(pe.max()),
        final_pe=float(pe[-1]),
    )


def predicted_leakage_ae(t, alpha2, delta, omega_rabi, d_omega=0.0, d_delta=0.0):
    """Leading-order |e> population for AE under a single static error.

    |alpha|^2 (O/D)^2 sin^2(w t/2 + t dO sin(theta)/2), or with dD cos(theta)
    in place of dO sin(theta); theta = arctan(O/D). The two errors are only
    treated separately.
    """
    if d_omega != 0.0 and d_delta != 0.0:
        raise ValueError("predictor covers one error at a time; got both d_omega and d_delta")
    if not delta > 0:
        raise ValueError("predictor assumes a positive detuning")
    t = np.asarray(t, dtype=float)
    w = math.hypot(delta, omega_rabi)
    theta = math.atan2(omega_rabi, delta)
    drift = d_omega * math.sin(theta) + d_delta * math.cos(theta)
    return alpha2 * (omega_rabi / delta) ** 2 * np.sin(w * t / 2 + t * drift / 2) ** 2


def predicted_leakage_ps(alpha2, delta, omega_rabi, stage: str = "plateau") -> float:
    """Leading-order |e> population of the phase-shift scheme.

    "plateau": (1/4)|alpha|^2 (O/D)^2 while parked, independent of static errors.
    "final": 0 after the unparking segment.
    """
    if stage == "plateau":
        return 0.25 * alpha2 * (omega_rabi / delta) ** 2
    if stage == "final":
        return 0.0
    raise ValueError(f"unknown stage {stage!r}")


def parked_leakage(alpha2, delta, omega_rabi) -> float:
    """Exact parked population |alpha|^2 sin^2(phi_c/2) (O/w)^2 of the error-free scheme."""
    w = math.hypot(delta, omega_rabi)
    phi_c = math.acos(delta / (delta + w))
    return alpha2 * math.sin(phi_c / 2) ** 2 * (omega_rabi / w) ** 2
