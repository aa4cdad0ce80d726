"""Exception types shared across the package."""


class EkrError(Exception):
    """Base class for all errors raised by ekr_kit."""


class DomainError(EkrError, ValueError):
    """An argument lies outside the domain of an operation."""


class ResourceError(EkrError, RuntimeError):
    """A size cap would be exceeded."""


class InvariantError(EkrError, AssertionError):
    """An internal invariant that should be impossible to break was broken."""
