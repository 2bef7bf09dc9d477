"""Exception hierarchy shared by all modules."""


class IsotropicError(ValueError):
    """Base class for every error raised by this package."""


class DimensionMismatch(IsotropicError):
    pass


class SingularMatrix(IsotropicError):
    pass


class NotSymmetric(IsotropicError):
    pass


class NotSPD(IsotropicError):
    pass


class NotSelfAdjoint(IsotropicError):
    pass


class NoConvergence(IsotropicError):
    pass


class DomainViolation(IsotropicError):
    """A point lies outside the domain cone or outside the domain of psi."""


class ZeroDenominator(DomainViolation):
    pass


class NonDifferentiablePoint(DomainViolation):
    """psi is defined at the point but lacks the requested derivative there."""
