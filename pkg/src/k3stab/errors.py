"""Exception types shared by the kernel modules and the command-line front end."""


class StabError(Exception):
    """Base class for all errors raised by k3stab."""

    exit_code = 3


class ConfigError(StabError):
    """Malformed or inconsistent surface configuration."""

    exit_code = 2


class DomainError(StabError):
    """An operation was called outside its precondition."""

    exit_code = 3


class DegenerateChargeError(DomainError):
    """A central charge vanished where a phase was required."""


class NoQRepresentativeError(DomainError):
    """The null line of a positive plane has zero rank component."""


class EnumerationCapError(StabError):
    """A certified search box exceeds the configured cap.

    ``required`` carries the box volume that would have been needed.
    """

    exit_code = 4

    def __init__(self, message, required=None, cap=None):
        super().__init__(message)
        self.required = required
        self.cap = cap


class NonTerminationError(StabError):
    """Chamber reduction hit its step limit; ``trace`` holds the visited points."""

    def __init__(self, message, trace=()):
        super().__init__(message)
        self.trace = list(trace)
