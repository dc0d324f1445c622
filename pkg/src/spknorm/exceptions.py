"""Exception types shared across the package."""


class SpknormError(Exception):
    """Base class for all errors raised by this package."""


class FormatError(SpknormError):
    """A binary or text file does not follow the expected format."""


class CorruptionError(SpknormError):
    """A file's payload disagrees with its own header."""


class DataError(SpknormError):
    """Input values are invalid (non-finite, inconsistent dimensions, ...)."""


class LabelingError(SpknormError):
    """Frames cannot be labeled (e.g. an utterance has no alignment)."""


class DegenerateError(SpknormError):
    """An operation received an input too small or too flat to act on."""
