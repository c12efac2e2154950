"""Exception hierarchy.

Every error raised for bad input derives from :class:`MomentBoundsError`
(itself a ``ValueError``), so callers can catch the family at once. The CLI
prints the class name of the inner error before exiting with status 2.
"""


class MomentBoundsError(ValueError):
    """Base class for all input/validation errors of the package."""


class InvalidInput(MomentBoundsError):
    """Malformed input (length mismatch, non-finite number, bad file)."""


class AtomOutOfRange(MomentBoundsError):
    """An atom does not lie strictly inside (-1, 1)."""


class NegativeWeight(MomentBoundsError):
    pass


class EmptyMeasure(MomentBoundsError):
    """No atoms, or every weight is zero."""


class NegativeDensityValue(MomentBoundsError):
    pass


class ZeroMass(MomentBoundsError):
    """The density vanishes at every quadrature node."""


class CenterOutOfRange(MomentBoundsError):
    pass


class PointOutOfRange(MomentBoundsError):
    pass


class InfeasibleMoments(MomentBoundsError):
    """(m, v) is not the mean/variance pair of any measure on (-1, 1)."""


class DomainError(MomentBoundsError):
    pass


class EpsOutOfRange(MomentBoundsError):
    pass


class InfeasibleConstraint(MomentBoundsError):
    """No measure on (-1, 1) matches the requested (m, v)."""


class X1OutOfRange(MomentBoundsError):
    pass


class OracleViolation(AssertionError):
    """A brute-force oracle contradicted one of the lower bounds.

    This signals a bug in the implementation, never bad user input.
    """
