"""Closed-form SiLU feedforward networks with verified approximation error.

The package builds one-hidden-layer and composed SiLU networks whose
weights are written down analytically (no training), measures their
sup-norm error against the functions they approximate, and exposes a CLI
that emits deterministic CSV reports and SVG figures.
"""
from .errors import (
    CapacityError,
    DegenerateShiftError,
    DomainError,
    InfeasibleError,
    OverflowGuardError,
    ParseError,
    SiluNetError,
    WiringError,
)

__version__ = "0.1.0"

__all__ = [
    "CapacityError",
    "DegenerateShiftError",
    "DomainError",
    "InfeasibleError",
    "OverflowGuardError",
    "ParseError",
    "SiluNetError",
    "WiringError",
    "__version__",
]
