"""Exception hierarchy shared by the library and the CLI.

Every exception carries the `ExitCode` the CLI runner should terminate with, exposed as
the `code` attribute.
"""
from .status import ExitCode, ExitCodes


class AerError(Exception):
    code: ExitCode = ExitCodes.INTERNAL_ERROR


class ParameterError(AerError, ValueError):
    """An argument or configuration value is outside its valid domain."""

    code = ExitCodes.CONFIG_ERROR


class ShapeError(AerError, ValueError):
    """Array lengths or feature layouts do not agree."""


class ModelError(AerError):
    """A fitted model is unusable (e.g. it holds no exemplars)."""


class DataError(AerError):
    code = ExitCodes.DATA_ERROR


class FormatError(DataError):
    """Malformed file contents."""


class UnsupportedCodecError(DataError):
    pass


class EmptySignalError(DataError):
    pass


class TooShortError(DataError):
    pass


class EmptyManifestError(DataError):
    pass


class DuplicateEntryError(DataError):
    pass


class DegenerateSignalError(DataError):
    """The series has no measurable curve length (constant or numerically flat)."""


class InsufficientDataError(DataError):
    pass


class InsufficientClassesError(InsufficientDataError):
    pass


class ProtocolError(DataError):
    """A speaker split cannot be formed from the available speakers."""
