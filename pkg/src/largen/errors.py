"""Error taxonomy shared by the whole package.

Every failure mode that callers are expected to handle gets its own class so
that the CLI can map exceptions to machine-readable error objects.  Plain
``ZeroDivisionError`` is used for scalar/rational-function division by zero.
"""


class LargenError(Exception):
    """Base class for all package-specific errors."""


class PrecisionExhausted(LargenError):
    """Requested digits cannot be certified (quadrature or root refinement)."""


class NotTotalDerivative(LargenError):
    """integrate_exact was asked to invert d/dx on something outside its image."""


class NoAdmissibleRoot(LargenError):
    """No positive hodograph root with a nonnegative induced density exists."""


class NoTwoCutSolution(LargenError):
    """The two-cut endpoint system has no admissible solution at this T."""


class Unclassifiable(LargenError):
    """Neither candidate phase is admissible at the requested tolerance."""


class OutsideSupport(LargenError):
    """Density evaluation requested outside the closed support."""


class CriticalPointHit(LargenError):
    """A regular expansion was requested at a point where the hodograph degenerates."""


class SingularHodograph(LargenError):
    """The two-cut hodograph Jacobian is singular at the solution."""


class NumericallySingular(LargenError):
    """Moment-to-recurrence reduction lost too much precision.

    Carries ``trusted_n``: the largest recurrence index that is still certified.
    """

    def __init__(self, message: str, trusted_n: int = -1):
        super().__init__(message)
        self.trusted_n = trusted_n


class TruncationExceeded(LargenError):
    """A series operation consumed more orders than were computed."""


class Mismatch(LargenError):
    """Cross-validation failed; carries the symbolic difference when available."""

    def __init__(self, message: str, difference=None):
        super().__init__(message)
        self.difference = difference
