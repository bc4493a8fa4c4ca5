"""Quasi-static deformation modelling for embroidery pneumatic actuators.

Predicts bending angle versus pressure from tube material and embroidery
pattern geometry, calibrates model parameters against measured data, and
post-processes motion-capture experiments into pressure-angle datasets.
"""

from .calibration import (
    CalibrationProblem,
    FitResult,
    TubeFitResult,
    calibrated_tube,
    fit_pressure_angle,
    fit_tube_geometry,
)
from .core import (
    ActuatorModel,
    Beta0Mode,
    DomainError,
    EmbroideryDesign,
    Pattern,
    TubeMaterial,
    braiding_angle0,
    inner_radius,
    internal_volume,
    resolve_orientation_sign,
    sleeve_radius,
)
from .deformation import (
    CurveSample,
    DeformationState,
    NoEquilibriumError,
    PressureAngleCurve,
    cross_l_from_theta,
    cross_radius_from_l,
    equilibrium_length,
    generalized_force,
    internal_volume_gradient,
    pressure_to_angle,
    strain_energy,
    strain_energy_gradient,
    sweep_curve,
    zigzag_theta_from_l,
)
from .estimator import PressureAngleEstimator
from .inflation import (
    inflation_pressure,
    make_actuator_model,
    radius_at_pressure,
    transition_pressure,
)
from .mocap import (
    ExperimentDataset,
    MarkerFrame,
    MocapError,
    Plateau,
    detect_plateaus,
    load_marker_csv,
    load_pairs_csv,
    marker_bending_angle,
    process_frames,
    split_branches,
    write_pairs_csv,
)

__version__ = "0.1.0"

__all__ = [
    "ActuatorModel",
    "Beta0Mode",
    "CalibrationProblem",
    "CurveSample",
    "DeformationState",
    "DomainError",
    "EmbroideryDesign",
    "ExperimentDataset",
    "FitResult",
    "MarkerFrame",
    "MocapError",
    "NoEquilibriumError",
    "Pattern",
    "Plateau",
    "PressureAngleCurve",
    "PressureAngleEstimator",
    "TubeFitResult",
    "TubeMaterial",
    "braiding_angle0",
    "calibrated_tube",
    "cross_l_from_theta",
    "cross_radius_from_l",
    "detect_plateaus",
    "equilibrium_length",
    "fit_pressure_angle",
    "fit_tube_geometry",
    "generalized_force",
    "inflation_pressure",
    "inner_radius",
    "internal_volume",
    "internal_volume_gradient",
    "load_marker_csv",
    "load_pairs_csv",
    "make_actuator_model",
    "marker_bending_angle",
    "pressure_to_angle",
    "process_frames",
    "radius_at_pressure",
    "resolve_orientation_sign",
    "sleeve_radius",
    "split_branches",
    "strain_energy",
    "strain_energy_gradient",
    "sweep_curve",
    "transition_pressure",
    "write_pairs_csv",
    "zigzag_theta_from_l",
]
