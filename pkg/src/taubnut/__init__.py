"""Classical eta-deformed Kepler (Taub-NUT) system: algebra, orbits, oracle checks."""

from .errors import (
    BoundaryHitError,
    ConvergenceError,
    DomainError,
    NoBoundOrbitError,
    NoCrossingError,
    OutOfAnnulusError,
    SingularPointError,
    StepFailureError,
    TaubNutError,
    ValidationError,
)
from .hamiltonian import FIGURE_ENERGY, FIGURE_PARAMS, PhasePoint3D, RadialState, SystemParams

__version__ = "0.1.0"

__all__ = [
    "BoundaryHitError",
    "ConvergenceError",
    "DomainError",
    "NoBoundOrbitError",
    "NoCrossingError",
    "OutOfAnnulusError",
    "SingularPointError",
    "StepFailureError",
    "TaubNutError",
    "ValidationError",
    "FIGURE_ENERGY",
    "FIGURE_PARAMS",
    "PhasePoint3D",
    "RadialState",
    "SystemParams",
]
