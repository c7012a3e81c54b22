"""Exact arithmetic for the admissible-level sl3 minimal models M(u,v).

The subpackages cover root data, admissible weights, module labels and their
identifications, degenerations, torus Fourier analysis, modular data of
M(3,2), the standard Verlinde formula and the Grothendieck fusion ring of
M(3,2).
"""

from .errors import (
    DegenerateParameterError, DomainError, InvariantError, LabelSyntaxError,
    LevelError, NonAdmissibleLevelError, ResolutionError, ScopeError, Sl3mmError,
)
from .rootdata import M32, Coweight, Level, Weight

__version__ = "0.1.0"

__all__ = [
    "Coweight", "DegenerateParameterError", "DomainError", "InvariantError",
    "LabelSyntaxError", "Level", "LevelError", "M32", "NonAdmissibleLevelError",
    "ResolutionError", "ScopeError", "Sl3mmError", "Weight",
]
