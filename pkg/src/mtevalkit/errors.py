"""Exception hierarchy shared by all toolkit modules.

Everything raised on bad data derives from :class:`MtevalkitError`, which
the CLI maps to exit code 2. Usage errors (bad flags, unknown subcommand)
are handled separately and map to exit code 1.
"""


class MtevalkitError(Exception):
    """Base class for data and validation errors."""


class LoadError(MtevalkitError):
    """A referenced input file is missing or unreadable."""


class AlignmentError(MtevalkitError):
    """Line-aligned files disagree on line counts."""


class ValidationError(MtevalkitError):
    """Input violates a documented invariant (empty line, bad score, ...)."""


class ScoringError(MtevalkitError):
    """A metric or model cannot score the given input."""


class DegenerateInputError(MtevalkitError):
    """Statistics are undefined for this input (zero variance, |r| = 1, ...)."""
