"""Exception types shared across the package."""


class WorkFdrError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(WorkFdrError):
    """A user-supplied parameter is invalid (non-finite angle, negative beta, ...)."""


class UnsupportedDimensionError(WorkFdrError):
    """A matrix dimension falls outside the supported 2x2 / 4x4 range."""


class ContractViolationError(WorkFdrError):
    """An input failed a precondition (non-unitary, non-Hermitian, bad density, ...)."""


class NumericFailureError(WorkFdrError):
    """An internal numerical routine failed to converge or failed a self-check."""
