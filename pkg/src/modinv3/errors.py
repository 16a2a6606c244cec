"""Shared exception types."""


class ContextMismatchError(ValueError):
    """Arithmetic attempted between scalars of different field contexts."""


class InexactDivisionError(ArithmeticError):
    """An exact polynomial division left a remainder; carries the offender."""


class DegenerateSpecializationError(RuntimeError):
    """Resample budget exhausted while looking for nonzero guard minors."""


class BudgetExceededError(RuntimeError):
    """A configured size budget (norm degree, linear algebra) was exceeded."""


class VerificationError(AssertionError):
    """A mechanical check failed; message carries the failing certificate."""
