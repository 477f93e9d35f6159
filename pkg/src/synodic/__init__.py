"""Celestial mechanics: Kepler's equation, conic orbits, spherical
astronomy and the circular restricted three-body problem."""

from .core import (
    Angle,
    CloseApproachError,
    DegenerateConfigurationError,
    DivergenceError,
    DomainError,
    NoFixError,
    SingularityError,
    SynodicError,
    Tolerance,
    normalize_angle,
    signed_angle,
)

__version__ = "0.1.0"
