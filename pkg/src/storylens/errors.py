"""Exception types shared across the engine."""


class StorylensError(Exception):
    """Base class for all engine errors."""


class MalformedDelta(StorylensError):
    """An edit delta does not apply cleanly to the previous document."""


class SpanOutOfRange(StorylensError):
    """A span lies outside the text it was declared against."""


class UnknownPosClass(StorylensError):
    """An annotation record names a part-of-speech class we do not know."""


class UnknownEntity(StorylensError):
    """Referenced character id does not exist (or is tombstoned)."""


class SelfMerge(StorylensError):
    """Attempt to merge a character into itself."""


class DuplicateAlias(StorylensError):
    """Alias already belongs to a live character record."""


class UnknownDimension(StorylensError):
    """Identity dimension is not part of the schema."""


class NoEligibleSubjects(StorylensError):
    """Fewer than two subjects have enough embedded words to compare."""


class CorruptFile(StorylensError):
    """Project file failed to parse or validate.

    ``field`` carries the offending field path when known.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message)
        self.field = field


class UnsupportedVersion(StorylensError):
    """Project file format_version is newer than this build understands."""
