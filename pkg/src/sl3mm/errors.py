"""Exception hierarchy shared by the library and the command line."""


class Sl3mmError(Exception):
    """Base class for every error raised by the package."""


class DomainError(Sl3mmError, ValueError):
    """A request that is well formed but mathematically out of range."""


class LevelError(DomainError):
    """The pair (u, v) does not describe a supported admissible level."""


class NonAdmissibleLevelError(LevelError):
    """u = 2: the level is valid for the vertex algebra but not admissible."""


class DegenerateParameterError(DomainError):
    """A family parameter sits on a reducible locus and must go through degen."""


class ScopeError(DomainError):
    """Character or fusion data requested outside M(3,2).

    At v > 1 the characters of conjugate relaxed modules become linearly
    dependent except at (u, v) = (3, 2), so the standard module formalism
    used here has no well defined S-matrix elsewhere.
    """


class LabelSyntaxError(Sl3mmError, ValueError):
    """A label string does not follow the grammar."""


class InvariantError(Sl3mmError, AssertionError):
    """An internal consistency check failed; indicates a bug."""


class ResolutionError(InvariantError):
    """The resolution engine could not recollect a product into labels."""


LINEAR_DEPENDENCE_MESSAGE = (
    "characters of the standard modules are linearly dependent for this "
    "level (conjugate relaxed families share a character); only "
    "(u, v) = (3, 2) is supported for v > 1"
)
