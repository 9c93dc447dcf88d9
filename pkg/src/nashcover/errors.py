"""Exception types raised across the package."""


class NashCoverError(Exception):
    """Base class for all package errors."""


class InvalidInputError(NashCoverError, ValueError):
    """Malformed instance, solution, or parameter."""


class UnsatisfiableFamilyError(NashCoverError, ValueError):
    """A constraint family has no members."""


class EnumerationTooLargeError(NashCoverError):
    """Brute-force enumeration would exceed its configured limit."""


class IterationGuardError(NashCoverError):
    """The local search exceeded its iteration guard.

    ``trace`` holds the partial trace; this never fires on a correct build.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class InternalConsistencyError(NashCoverError):
    """Coverage bookkeeping contradicts itself (e.g. a selected agent with v_i = 1)."""


class GenerationError(NashCoverError):
    """A generator spec cannot produce a valid instance."""
