"""Explicit periodic waves of the phi^4 equation: construction, spectra, stability, evolution."""
from .errors import (
    ConvergenceError,
    DomainError,
    RegimeError,
    UnsupportedFamily,
    UnsupportedField,
    VerificationError,
)
from .wave_families import Family, WaveParams, admissible_speeds, period_of, profile, solve_family

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DomainError",
    "RegimeError",
    "UnsupportedFamily",
    "UnsupportedField",
    "VerificationError",
    "Family",
    "WaveParams",
    "admissible_speeds",
    "period_of",
    "profile",
    "solve_family",
]
