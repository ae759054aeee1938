"""Exception types raised across the package."""


class BellEntropyError(Exception):
    """Base class for every error raised by bell_entropy."""


class DimensionError(BellEntropyError, ValueError):
    """Matrix or vector has the wrong shape."""


class NotHermitianError(BellEntropyError, ValueError):
    """Matrix is not Hermitian within tolerance."""


class ConvergenceError(BellEntropyError, RuntimeError):
    """Iterative solver exhausted its budget."""


class MatrixFunctionError(BellEntropyError, ValueError):
    """Scalar function is undefined on part of a spectrum."""


class InvalidStateError(BellEntropyError, ValueError):
    """Matrix is not a valid density matrix."""


class InvalidSettingsError(BellEntropyError, ValueError):
    """Measurement settings are not unit Bloch vectors or valid projectors."""


class MalformedInputError(BellEntropyError, ValueError):
    """Input document does not have the expected structure."""


class DomainError(BellEntropyError, ValueError):
    """Parameter outside the range an operation accepts."""


class ConfigError(BellEntropyError, ValueError):
    """Environment setting that cannot be parsed."""
