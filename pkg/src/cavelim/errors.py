"""Exception types shared across the package."""


class CavelimError(Exception):
    """Base class for all package errors."""


class ValidationError(CavelimError):
    """Input violates a documented precondition or invariant."""


class StateError(CavelimError):
    """Operation called out of order (e.g. recurrence slice missing)."""


class InapplicableError(CavelimError):
    """Requested method cannot be applied to this configuration
    (e.g. third-order elimination without a resonant frequency triple)."""


class IntegrationQualityError(CavelimError):
    """Propagation exceeded its norm-drift tolerance."""

    def __init__(self, message: str, step: int | None = None):
        super().__init__(message)
        self.step = step


class ExtractionError(CavelimError):
    """Observable extraction failed (e.g. no oscillation in window)."""


class ConfigError(CavelimError):
    """Configuration file cannot be parsed or fails validation."""
