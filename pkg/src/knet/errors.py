"""Exception types shared across the pipeline.

The CLI maps these onto exit codes: ConfigError -> 2, DataError -> 3,
InvariantError (and anything unexpected) -> 4.
"""


class KnetError(Exception):
    """Base class for all pipeline errors."""


class ConfigError(KnetError):
    """Invalid or inconsistent configuration."""


class DataError(KnetError):
    """Malformed input data or a value that violates an operation's contract."""


class InvariantError(KnetError):
    """An internal consistency check failed; indicates a bug, not bad input."""
