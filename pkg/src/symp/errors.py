"""Shared exception types. The CLI maps these onto exit codes."""


class SympError(Exception):
    """Base class for all package-specific errors."""


class ParseError(SympError, ValueError):
    """Malformed text input (partition, polynomial or Fourier table)."""


class NotDominated(SympError, ValueError):
    """Partition subtraction requested without componentwise domination."""


class CapExceeded(SympError):
    """Enumeration size cap exceeded."""


class OutOfRange(SympError):
    """A moment was requested outside the proven validity range."""


class BudgetExceeded(SympError):
    """A finite-field enumeration would exceed its visit budget."""


class CostGuard(SympError):
    """A quadrature request exceeds the configured cost limits."""


class NotSquarefree(SympError, ValueError):
    """Operation requires a squarefree polynomial."""


class PreconditionViolated(SympError, ValueError):
    """An operation's stated precondition does not hold."""
