"""Exception types raised by the toolkit.

Everything derives from :class:`FloquetAtlasError` so callers can catch
numerical failures in one clause; :class:`ConsistencyViolation` is kept
separate in the CLI exit-code mapping because it signals that a verified
invariant failed rather than that a computation broke down.
"""


class FloquetAtlasError(Exception):
    """Base class for all toolkit errors."""


class IntegrationFailure(FloquetAtlasError):
    """The adaptive step controller could not meet the requested tolerance."""


class NotSymplectic(FloquetAtlasError):
    """A matrix failed the unit-determinant check."""


class NotOnUnitCircle(FloquetAtlasError):
    """A boundary-condition multiplier omega had |omega| != 1."""


class EccOutOfRange(FloquetAtlasError):
    """Eccentricity outside [0, 1)."""


class NotConverged(FloquetAtlasError):
    """A truncated computation changed under refinement."""


class RootNotBracketed(FloquetAtlasError):
    """The sign-change scan did not isolate the expected root."""


class InsufficientSamples(FloquetAtlasError):
    """A curve does not carry the samples an operation requires."""


class NearSingularity(FloquetAtlasError):
    """Parameter inside the guard band around a pole of the trace function."""


class QuadratureNotConverged(FloquetAtlasError):
    """Doubling the quadrature order moved the result beyond tolerance."""


class NotInvertible(FloquetAtlasError):
    """The truncated resolvent is singular at the requested parameter."""


class CurveRangeExceeded(FloquetAtlasError):
    """Query eccentricity outside the traced range of a degeneracy curve."""


class ConsistencyViolation(FloquetAtlasError):
    """Two independent computations of the same quantity disagree."""

    def __init__(self, message, point=None, details=None):
        super().__init__(message)
        self.point = point
        self.details = details
