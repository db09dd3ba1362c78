"""Simulation and adaptive robust control of a two-link robot brachiating on a cable."""

from .dynamics import (
    GRAVITY,
    AffineTerms,
    LinkagePoints,
    ManipulatorMatrices,
    RobotParams,
    RobotState,
    SingularityError,
    SpringDamperParams,
    affine_terms,
    cable_surrogate_force,
    forward_dynamics,
    kinematics,
    manipulator_matrices,
    output,
    output_rate,
    param_vector,
    require_equal_arms,
    spring_damper_force,
    total_energy,
)

__all__ = [
    "GRAVITY",
    "AffineTerms",
    "LinkagePoints",
    "ManipulatorMatrices",
    "RobotParams",
    "RobotState",
    "SingularityError",
    "SpringDamperParams",
    "affine_terms",
    "cable_surrogate_force",
    "forward_dynamics",
    "kinematics",
    "manipulator_matrices",
    "output",
    "output_rate",
    "param_vector",
    "require_equal_arms",
    "spring_damper_force",
    "total_energy",
]
