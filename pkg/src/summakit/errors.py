"""Exception hierarchy for the toolkit.

Errors are split by who can fix them: `ValidationError`/`ConfigError` mean the
input or configuration is wrong (CLI exit 2), `NumericError` means a solver
failed to converge (CLI exit 1), `GenerationError` means a requested instance
regime cannot be realised.
"""


class SummakitError(Exception):
    """Base class for all toolkit errors."""


class ValidationError(SummakitError):
    """A value object failed its structural invariants."""


class DomainError(SummakitError):
    """An evaluation was requested outside the declared domain."""


class NumericError(SummakitError):
    """A numeric routine failed to bracket or converge."""


class ConfigError(SummakitError):
    """A run configuration violates a precondition."""


class GenerationError(SummakitError):
    """A generator regime is infeasible for the requested parameters."""
