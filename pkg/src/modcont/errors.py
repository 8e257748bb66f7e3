"""Exception hierarchy shared by every module of the package."""


class ModContError(Exception):
    """Base class for all errors raised by modcont."""


class DomainError(ModContError, ValueError):
    """An argument lies outside the validity domain of the operation."""


class NonPositiveError(ModContError, ValueError):
    """A diffusivity evaluator returned a value <= 0."""


class QuadratureFailure(ModContError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class Inconclusive(ModContError):
    """A numeric probe could not classify a limit within its cutoff."""


class OutOfRange(ModContError, ValueError):
    """A query point lies outside the extent of a sampled object."""


class PeriodMismatch(ModContError, ValueError):
    pass


class GridMismatch(ModContError, ValueError):
    pass


class TimeNotSampled(ModContError, KeyError):
    pass


class SandwichFailure(ModContError):
    """The mollified modulus violates the two-sided comparison it must satisfy."""


class BoundaryNonzero(ModContError, ValueError):
    pass


class NoRoot(ModContError, ValueError):
    pass


class NonConvergence(ModContError, ArithmeticError):
    pass


class CoefficientFloorViolated(ModContError, ValueError):
    pass


class BlowUp(ModContError, ArithmeticError):
    """The numerical solution became non-finite or exceeded 1e12.

    The trajectory computed up to the failure is available as ``partial``.
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial
