"""Custom exception classes for error categorization and exit-code mapping."""

from typing import Optional


class TwistorsionError(Exception):
    """Base exception for all twistorsion errors."""

    def __init__(self, message: str, details: Optional[dict] = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class WordError(TwistorsionError):
    """Raised for alphabet mismatches, missing substitution images or unparsable words."""
    pass


class PresentationError(TwistorsionError):
    """Raised for unsupported generator changes, incompatible bases or bad windows."""
    pass


class PermutationError(TwistorsionError):
    """Raised for degree mismatches, non-bijective images or unassigned generators."""
    pass


class SearchBudgetError(TwistorsionError):
    """Raised when a requested search exceeds the configured degree budget."""
    pass


class CertificateError(TwistorsionError):
    """Raised when a certificate cannot be built (singular matrix, k cap exceeded)."""
    pass


class OrderError(TwistorsionError):
    """Raised for order-context mismatches or non-zero residual levels."""
    pass


class ParameterError(TwistorsionError):
    """Raised when (p, q) parameters are zero or outside an operation's domain."""
    pass


class TableError(TwistorsionError):
    """Raised when the witness table cannot be read at all."""
    pass


class CacheError(TwistorsionError):
    """Raised when the result cache cannot be written."""
    pass


class ConfigurationError(TwistorsionError):
    """Raised when configuration or environment variables are invalid."""
    pass
