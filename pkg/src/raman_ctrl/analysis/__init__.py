from .fidelity import (
    DEFAULT_SEED,
    average_fidelity_over_states,
    gate_fidelity,
    haar_qubit_states,
    ideal_gate,
    projector_gate,
    restrict,
    rotation_gate,
    state_fidelity,
)
from .leakage import (
    LeakageReport,
    leakage_report,
    parked_leakage,
    predicted_leakage_ae,
    predicted_leakage_ps,
    time_average,
)
from .robustness import (
    FidelityReport,
    RobustnessGrid,
    SchemeSpec,
    default_axis,
    fidelity_report,
    gate_propagators,
    mc_average_over_theta,
    robustness_grid,
    theta_sample_values,
)
from .stirap import StirapOptimum, optimize_stirap, stirap_transfer

__all__ = [
    "DEFAULT_SEED",
    "FidelityReport",
    "LeakageReport",
    "RobustnessGrid",
    "SchemeSpec",
    "StirapOptimum",
    "average_fidelity_over_states",
    "default_axis",
    "fidelity_report",
    "gate_fidelity",
    "gate_propagators",
    "haar_qubit_states",
    "ideal_gate",
    "leakage_report",
    "mc_average_over_theta",
    "optimize_stirap",
    "parked_leakage",
    "predicted_leakage_ae",
    "predicted_leakage_ps",
    "projector_gate",
    "restrict",
    "robustness_grid",
    "rotation_gate",
    "state_fidelity",
    "stirap_transfer",
    "theta_sample_values",
    "time_average",
]
