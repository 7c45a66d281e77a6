"""Quasi-parabolic one-resonant germs: normal forms, basin regions and orbits."""

from ._qpgerm import (
    Analysis,
    Error,
    Germ,
    InputError,
    analyze,
    certify_one_resonance,
    find_resonances,
)

__all__ = [
    "Analysis",
    "Error",
    "Germ",
    "InputError",
    "analyze",
    "certify_one_resonance",
    "find_resonances",
]
