"""Exception hierarchy.

Domain errors map to CLI exit code 2, budget errors to exit code 3.
"""


class EllboundError(Exception):
    """Base class for all package errors."""


class DomainError(EllboundError, ValueError):
    """An input lies outside the domain where an operation is defined."""


class BudgetError(EllboundError):
    """A configured computational budget was exceeded."""


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class FieldMismatch(DomainError):
    pass


class ReduciblePolynomial(DomainError):
    pass


class PrecisionUnreachable(EllboundError):
    """Certified root refinement stalled (ill-conditioned polynomial)."""


class IndeterminateSplitting(EllboundError):
    """The prime may divide the index of the generator; splitting is not certified."""

    def __init__(self, p, msg=None):
        self.p = p
        super().__init__(msg or f"splitting of {p} not certified (index-divisible prime)")


class ZeroArgument(DomainError):
    pass


class NegativeInput(DomainError):
    pass


class FactorizationTooLarge(BudgetError):
    pass


class ConvergenceFailure(BudgetError):
    pass


class CoordinateBlowup(BudgetError):
    pass


class BudgetExceeded(BudgetError):
    pass


class Undecided(EllboundError):
    """Neither certificate could be obtained; the question is left open."""


class NotPositiveDefinite(DomainError):
    pass


class LevelOverflow(DomainError):
    pass


class NotASum(DomainError):
    pass


class ZeroElement(DomainError):
    pass


class DegenerateTriple(DomainError):
    pass


class PrimitiveElementSearchFailed(EllboundError):
    pass


class MissingKey(DomainError, KeyError):
    def __str__(self):
        return f"MissingKey({self.args[0]!r})"


class NonPositiveValue(DomainError):
    pass
