"""Exception types raised by the library."""


class UpsilonError(Exception):
    """Base class for library errors."""


class DomainError(UpsilonError, ValueError):
    """An argument lies outside the domain an operation is defined on."""


class SizingError(UpsilonError, ValueError):
    """A base prime list is too short for the requested sieve window."""


class CapacityError(UpsilonError):
    """The requested size exceeds the configured capacity cap."""
