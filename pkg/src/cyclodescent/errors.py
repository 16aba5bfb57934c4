"""Exception hierarchy.

Every error raised by the library derives from :class:`CycloError`; the CLI maps
the three families below onto exit codes 2, 3 and 4.
"""


class CycloError(Exception):
    """Base class for all library errors."""


class ValidationError(CycloError, ValueError):
    """Bad input or configuration. ``path`` names the offending field, if any."""

    def __init__(self, message, path=None):
        self.path = path
        if path:
            message = f"{path}: {message}"
        super().__init__(message)


class ComputationError(CycloError, ArithmeticError):
    """A well-formed request that cannot be carried out."""


class CacheError(CycloError):
    """Problems reading or writing the series cache."""


# padic_core
class NonUnit(ComputationError):
    pass


class NotCoprime(ValidationError):
    pass


class PrecisionMismatch(ValidationError):
    pass


# iwasawa_series
class InsufficientPrecision(ComputationError):
    pass


class LambdaOverflow(ComputationError):
    pass


class NotDistinguished(ValidationError):
    pass


class PointNotInMaximalIdeal(ValidationError):
    pass


# delta_branch / finite_modules
class ActionOrderInvalid(ValidationError):
    pass


class IllDefinedEndomorphism(ValidationError):
    pass


class NonInvertibleAction(ValidationError):
    pass


# descent_engine
class MissingAction(ValidationError):
    pass


class BranchZeroUnsupported(ComputationError):
    pass


class LevelTooSmall(ValidationError):
    pass


# elementary_lambda
class BranchZero(ValidationError):
    pass


class UncertifiedValuation(ComputationError):
    pass


# lseries
class BranchMismatch(ValidationError):
    pass


class OddBranch(ValidationError):
    pass


class NonIntegralResult(ComputationError):
    pass


class CalibrationFailed(ComputationError):
    pass


class ConventionUnresolved(ComputationError):
    pass


# cache
class CorruptCache(CacheError):
    pass


class VersionMismatch(CacheError):
    pass
