"""Exception types shared across the package."""


class SpinReduceError(Exception):
    """Base class for all spinreduce errors."""


class DimensionOverflowError(SpinReduceError):
    """Requested sector (or dense solve) exceeds the configured size cap."""


class EmptySectorError(SpinReduceError):
    """The requested total-magnetization sector contains no states."""


class DimensionTooSmallError(SpinReduceError):
    """The space is too small for the requested number of eigenpairs."""


class ConvergenceError(SpinReduceError):
    """Eigensolver failed to converge; carries the best residuals seen."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class NormalizationError(SpinReduceError):
    """Amplitude vector is not unit norm."""


class NoRootError(SpinReduceError):
    """The pinning target is unreachable for any coupling of the allowed sign."""


class BracketError(SpinReduceError):
    """Root bracketing failed after the maximum number of expansions."""


class NoCrossingError(SpinReduceError):
    """Gap scan found no interior minimum in the requested range."""


class EmptyWindowError(SpinReduceError):
    """No trajectory steps fall inside the requested dimension window."""


class ConfigError(SpinReduceError):
    """Run configuration file is missing keys or fails to parse."""
