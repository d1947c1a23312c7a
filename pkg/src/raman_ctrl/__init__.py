"""Simulation of stimulated Raman gates in three-level Lambda systems.

Compares constant-phase adiabatic elimination (AE), a phase-shift protocol
that parks the state in a dressed eigenstate and unparks it with a reversed
detuning (PS), and STIRAP.
"""
from .core import (
    BasisLabel,
    CouplingConfig,
    DegenerateCouplingError,
    DressedSystem,
    NumericalInvariantError,
    basis_state,
    bright_dark_states,
    build_hamiltonian,
    density_matrix,
    dressed_eigensystem,
    evolve_constant,
    populations,
)
from .propagation import (
    EvolutionRecord,
    IntegratorConfig,
    propagate_lindblad,
    propagate_unitary,
    reference_propagator,
)
from .schemes import (
    ControlSchedule,
    ControlSegment,
    ErrorModel,
    PhaseShiftParams,
    SampledEnvelope,
    ae_schedule,
    apply_static_errors,
    phase_shift_params,
    ps_schedule,
    stirap_schedule,
)

__version__ = "0.1.0"
