"""Exception hierarchy shared by all quotefam modules."""


class QuotefamError(Exception):
    """Base class for all library errors."""


class FormatError(QuotefamError):
    """Systemically malformed input data."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"{message} (first failure at line {line})"
        super().__init__(message)
        self.line = line


class DomainError(QuotefamError, ValueError):
    """An operation was called outside its documented domain."""


class ConfigError(QuotefamError, ValueError):
    """Invalid configuration value."""


class FitError(QuotefamError):
    """Nonlinear fit failed to converge; carries the best partial result."""

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class MissingArtifactError(QuotefamError):
    """A pipeline stage requires an artifact produced by an earlier stage."""
