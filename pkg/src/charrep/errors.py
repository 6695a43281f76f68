"""Exception hierarchy shared across the toolkit."""


class CharrepError(Exception):
    """Base class for all toolkit errors."""


class UsageError(CharrepError):
    """Bad invocation: missing arguments, unknown subcommand, bad config shape."""


class DataError(CharrepError):
    """Malformed or insufficient input data."""


class FormatError(DataError):
    """A file violated its declared format.

    Carries the 1-based line number when one is known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class OOVError(DataError):
    """A requested word is absent from an embedding vocabulary."""


class AlignmentError(DataError):
    """Procrustes alignment could not be fitted."""


class StageError(CharrepError):
    """A pipeline stage failed; wraps the underlying cause."""

    def __init__(self, stage, cause):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause
