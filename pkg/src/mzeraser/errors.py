"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Invalid or inconsistent configuration (maps to CLI exit code 2)."""


class ContractViolation(RuntimeError):
    """A numerical result broke one of its stated tolerances (CLI exit code 1)."""
