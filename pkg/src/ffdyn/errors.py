"""Exception types shared across the package."""


class FFDynError(Exception):
    """Base class for library errors."""


class ParseError(FFDynError, ValueError):
    """Malformed text input (polynomial, map, place, field spec)."""


class BudgetError(FFDynError):
    """A configured degree / iteration / subset budget was exceeded."""


class HypothesisError(FFDynError):
    """A mathematical precondition of an operation does not hold."""


class FactorizationError(FFDynError):
    """Factorization could not be carried out (e.g. no usable specialization)."""
