"""Numerical toolkit for boundary-damped tower models coupled to ODE blocks.

Discretizes the clamped bending beam with tip inertia, assembles the
closed-loop generators (static tip feedback, mass damper, hydrostatic
transmission), and verifies the stability structure numerically: passivity
certificates, transfer-function lower bounds, imaginary-axis spectra,
resolvent-norm growth and energy decay rates.
"""

from .beam_fem import (
    BeamMatrices,
    BeamParameters,
    Eq1Certificate,
    build_beam_matrices,
    check_condition_cond,
    check_condition_eq1,
    coefficient_from_spec,
    evaluate_energy,
    hermite_interpolate,
    resonance_ratio,
)
from .errors import (
    DimensionError,
    NumericalError,
    SpectrumHit,
    ToolkitError,
    ValidationError,
)
from .generator import DampingChannel, DiscreteGenerator, energy_coordinates
from .models import (
    HydraulicParameters,
    HydraulicPositivityReport,
    TmdParameters,
    TransferCrossValidation,
    assemble_combined,
    assemble_hydraulic,
    assemble_hydraulic_feedback,
    assemble_tmd,
    closed_form_reH2,
    combined_block,
    cross_validate_reH2,
    force_block,
    hydraulic_block,
    hydraulic_characteristic,
    hydraulic_d_coefficients,
    hydraulic_n_coefficients,
    hydraulic_positivity_check,
    scole_tip_block,
    state_space_reH2,
    tmd_block,
    torque_block,
)
from .passive_core import (
    CouplingBoundReport,
    EtaBound,
    FeedbackBoundReport,
    PassiveSystem,
    PassivityReport,
    TransferSample,
    check_coupled_resolvent_bound,
    check_feedback_bounds,
    couple_systems,
    eta_lower_bound,
    feedback_transform,
    random_passive_system,
    routh_hurwitz,
    transfer_function,
    verify_passivity,
)
from .spectral import (
    ResolventScan,
    SpectrumReport,
    eigen_report,
    kernel_check,
    mesh_frequency,
    resolvent_norm,
    scan_resolvent,
)
from .timesim import (
    DecayFit,
    EnergyTrajectory,
    beam_modes,
    classical_initial_data,
    default_timestep,
    fit_decay_rate,
    modal_frequency,
    simulate,
    verify_dissipation_identity,
)

__version__ = "0.1.0"

__all__ = [
    "BeamMatrices",
    "BeamParameters",
    "CouplingBoundReport",
    "DampingChannel",
    "DecayFit",
    "DimensionError",
    "DiscreteGenerator",
    "EnergyTrajectory",
    "Eq1Certificate",
    "EtaBound",
    "FeedbackBoundReport",
    "HydraulicParameters",
    "HydraulicPositivityReport",
    "NumericalError",
    "PassiveSystem",
    "PassivityReport",
    "ResolventScan",
    "SpectrumHit",
    "SpectrumReport",
    "TmdParameters",
    "ToolkitError",
    "TransferCrossValidation",
    "TransferSample",
    "ValidationError",
    "assemble_combined",
    "assemble_hydraulic",
    "assemble_hydraulic_feedback",
    "assemble_tmd",
    "beam_modes",
    "build_beam_matrices",
    "check_condition_cond",
    "check_condition_eq1",
    "check_coupled_resolvent_bound",
    "check_feedback_bounds",
    "classical_initial_data",
    "closed_form_reH2",
    "coefficient_from_spec",
    "combined_block",
    "couple_systems",
    "cross_validate_reH2",
    "default_timestep",
    "eigen_report",
    "energy_coordinates",
    "eta_lower_bound",
    "evaluate_energy",
    "feedback_transform",
    "fit_decay_rate",
    "force_block",
    "hermite_interpolate",
    "hydraulic_block",
    "hydraulic_characteristic",
    "hydraulic_d_coefficients",
    "hydraulic_n_coefficients",
    "hydraulic_positivity_check",
    "kernel_check",
    "mesh_frequency",
    "modal_frequency",
    "random_passive_system",
    "resolvent_norm",
    "resonance_ratio",
    "routh_hurwitz",
    "scan_resolvent",
    "scole_tip_block",
    "simulate",
    "state_space_reH2",
    "tmd_block",
    "torque_block",
    "transfer_function",
    "verify_dissipation_identity",
    "verify_passivity",
]
