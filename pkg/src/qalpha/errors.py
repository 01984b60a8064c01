"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid configuration or parameters.  CLI exit code 2."""


class InvariantViolation(RuntimeError):
    """An internal consistency check failed.  CLI exit code 1."""
