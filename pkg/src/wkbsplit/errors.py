"""Exception types shared across the package."""


class SolverError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(SolverError):
    """An argument violates a documented precondition."""


class CharacteristicsDiverged(SolverError):
    """The backward-characteristic solve lost its contraction guarantee."""


class OverflowRisk(SolverError):
    """A transform would exponentiate outside the safe floating-point range."""


class LogDomainError(SolverError):
    """A logarithm was requested at a non-positive argument."""


class DegenerateReference(SolverError):
    """A reference solution has a vanishing norm, so relative errors are undefined."""


class ConfigError(SolverError):
    """A sweep configuration file is malformed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CacheError(SolverError):
    """A cached reference file exists but cannot be parsed."""


class IoError(SolverError):
    """Reading or writing an artifact (CSV, cache file) failed."""
