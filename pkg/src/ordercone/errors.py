"""Exception hierarchy.

Domain errors are bad inputs (a cone with a line in it, a vector that
should be positive but is not).  Theorem violations mean two routes that
must agree did not; they always indicate a bug or a counterexample and are
never swallowed.
"""


class OrderConeError(Exception):
    pass


class ParseError(OrderConeError, ValueError):
    pass


class DomainError(OrderConeError):
    pass


class DimensionMismatch(DomainError, ValueError):
    pass


class NotPointed(DomainError):
    pass


class NotGenerating(DomainError):
    pass


class NotPositive(DomainError):
    pass


class NotApplicable(DomainError):
    pass


class NotIdempotent(DomainError):
    pass


class NotBandProjection(DomainError):
    pass


class TooManyFacets(DomainError):
    pass


class PreconditionViolation(DomainError):
    pass


class TheoremViolation(OrderConeError):
    pass


class PositivityContradiction(TheoremViolation):
    pass


class ValidationFailure(TheoremViolation):
    pass


class SearchExhausted(TheoremViolation):
    pass
