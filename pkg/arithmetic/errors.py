"""
Domain errors.

Every error carries a machine-readable ``code`` matching its class name, which
the command line reports verbatim.
"""


class ForgeError(Exception):
    """Base class for domain errors reported with exit code 1."""

    @property
    def code(self) -> str:
        return type(self).__name__

    def to_dict(self) -> dict:
        return {"error": self.code, "message": str(self)}


class NotPrime(ForgeError):
    pass


class BudgetExceeded(ForgeError):
    pass


class DivisionByZero(ForgeError):
    pass


class DescriptorMismatch(ForgeError):
    pass


class NotASubfield(ForgeError):
    pass


class NotSquarefree(ForgeError):
    pass


class GenusPrimeConflict(ForgeError):
    pass


class NotCMSymmetric(ForgeError):
    pass


class NotIrreducible(ForgeError):
    pass


class NotQuartic(ForgeError):
    pass


class InsufficientCensus(ForgeError):
    pass


class DegenerateD(ForgeError):
    pass


class EnumerationTooLarge(ForgeError):
    pass


class BadMultiplier(ForgeError):
    pass


class ConflictingConstraints(ForgeError):
    pass


class EmptyWindow(ForgeError):
    pass


class ConfigError(ForgeError):
    """Malformed experiment configuration (exit code 2)."""


class InconsistentLift(AssertionError):
    """Factor bookkeeping between h and its real subfield polynomial broke down."""


class InternalError(AssertionError):
    """A step that cannot fail on valid input failed."""
