"""Exception hierarchy shared by all modules."""


class CubeError(Exception):
    """Base class for every error raised by ncube."""


class SizeTooSmall(CubeError, ValueError):
    pass


class SizeTooLarge(CubeError, ValueError):
    pass


class SizeMismatch(CubeError, ValueError):
    pass


class UnknownGenerator(CubeError, ValueError):
    pass


class SliceOutOfRange(CubeError, ValueError):
    pass


class ClassNotPreserved(CubeError, ValueError):
    """A facet permutation mixes facets of different pieces."""


class TypingInconsistent(CubeError, RuntimeError):
    """The wing type constraint graph has an odd cycle."""


class NotationError(CubeError, ValueError):
    """Malformed move word; ``offset`` is the byte offset of the problem."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class UnknownToken(NotationError):
    pass


class UnknownName(CubeError, KeyError):
    pass


class NotApplicable(CubeError, ValueError):
    pass


class NotAConfiguration(CubeError, ValueError):
    pass


class MalformedConfiguration(CubeError, ValueError):
    pass


class IllegalColorMultiset(CubeError, ValueError):
    pass


class DegreeMismatch(CubeError, ValueError):
    pass
