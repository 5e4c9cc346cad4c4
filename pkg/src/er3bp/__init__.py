"""
Triangular equilibrium points of the planar elliptic restricted three-body
problem with triaxial primaries: location, linear stability, critical mass
ratio, linearized two-frequency motion and nonlinear propagation.
"""

from .equilibria import (
    Branch,
    EquilibriumPoint,
    Method,
    PerturbativeOffsets,
    locate_newton,
    perturbative_offsets,
    perturbative_point,
)
from .errors import (
    BracketInvalid,
    CollisionError,
    DegenerateSystem,
    ER3BPError,
    NoConvergence,
    NotStable,
    SingularConditions,
    SingularJacobian,
    StepUnderflow,
)
from .integrator import Trajectory, jacobi_constant, propagate, state_derivative
from .linmotion import DisplacementIC, ModeDecomposition, evaluate_series, mode_frequencies, solve_coefficients
from .model import PlanarState, Position, SystemParams, gradient, hessian, mean_motion, potential
from .stability import (
    CharacteristicCoefficients,
    CriticalMassResult,
    Stability,
    StabilityReport,
    analyze,
    characteristic_coefficients,
    classify,
    critical_mass,
    quartic_roots,
    stability_sweep,
)

__version__ = "0.1.0"

__all__ = [
    "BracketInvalid", "Branch", "CharacteristicCoefficients", "CollisionError",
    "CriticalMassResult", "DegenerateSystem", "DisplacementIC", "ER3BPError",
    "EquilibriumPoint", "Method", "ModeDecomposition", "NoConvergence", "NotStable",
    "PerturbativeOffsets", "PlanarState", "Position", "SingularConditions",
    "SingularJacobian", "Stability", "StabilityReport", "StepUnderflow", "SystemParams",
    "Trajectory", "analyze", "characteristic_coefficients", "classify", "critical_mass",
    "evaluate_series", "gradient", "hessian", "jacobi_constant", "locate_newton",
    "mean_motion", "mode_frequencies", "perturbative_offsets", "perturbative_point",
    "potential", "propagate", "quartic_roots", "solve_coefficients", "stability_sweep",
    "state_derivative",
]
