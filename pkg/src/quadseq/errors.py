"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when requested parameters cannot yield a valid construction."""


class StabilityError(RuntimeError):
    """Raised when a periodic complexity measurement fails to stabilize."""
