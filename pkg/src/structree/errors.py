"""Exception taxonomy shared across the library.

User-facing problems (bad files, bad flags, size caps) all derive from
InputError so the CLI can map them to exit code 1; anything else that
escapes is an internal error (exit code 2).
"""


class StructreeError(Exception):
    """Base class for all library errors."""


class InputError(StructreeError):
    """Invalid user input: bad ids, bad flags, malformed data."""


class ParseError(InputError):
    """Malformed text input; carries a line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigError(InputError):
    """Invalid configuration value (e.g. tree height below 2)."""


class SizeCapError(InputError):
    """Input exceeds a hard brute-force size cap."""


class FormatError(InputError):
    """Structurally invalid multi-file dataset (e.g. cross-graph edge)."""


class ConsistencyError(InputError):
    """Tree and graph do not describe the same object."""


class DomainError(InputError):
    """Mathematically undefined request (e.g. cosine of a zero vector)."""


class InternalError(StructreeError):
    """Invariant violation that should be unreachable for valid inputs."""
