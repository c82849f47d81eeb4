"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class DesignError(ValueError):
    """A filter or bank cannot be realised with the requested parameters."""


class PresetLookupError(LookupError):
    """No built-in preset exists for the requested scale/variant."""


class CoeParseError(ValueError):
    """Malformed COE document."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class FeasibilityWarning(UserWarning):
    """Band narrower than the window's main-lobe transition width."""
