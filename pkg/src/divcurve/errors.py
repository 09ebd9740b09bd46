"""Exception hierarchy.

Errors fall into two families that the CLI maps to distinct exit codes:
input problems (bad files, invalid universes, out-of-domain arguments) and
mathematical degeneracies of an otherwise valid universe.
"""


class DivcurveError(Exception):
    """Base class for all package errors."""


class InputError(DivcurveError):
    """The caller supplied data that cannot be used."""


class DegeneracyError(DivcurveError):
    """A valid input sits on a singular configuration of the closed forms."""


class InvalidUniverse(InputError):
    def __init__(self, violation: str, message: str = ""):
        self.violation = violation
        super().__init__(f"{violation}: {message}" if message else violation)


class DimensionMismatch(InputError):
    pass


class InsufficientData(InputError):
    pass


class NonPositiveGamma(InputError):
    pass


class VarianceBelowMinimum(InputError):
    pass


class BoundarySingularity(InputError):
    """Derivative requested at (or below) the square-root boundary of a curve."""


class NotPositiveDefinite(DegeneracyError):
    pass


class DegenerateSample(DegeneracyError):
    pass


class DegenerateD(DegeneracyError):
    """D = AC - B^2 is numerically zero: expected returns are proportional to 1."""


class DegenerateSharpe(DegeneracyError):
    pass


class TangentUndefined(DegeneracyError):
    """The risk-free rate equals the global minimum-variance return B/C."""
