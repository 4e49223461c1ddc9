"""Exception types raised by the library."""


class MultiIndexError(ValueError):
    """Base class for every error raised on invalid algebraic input."""


class NotPopulatedError(MultiIndexError):
    pass


class EmptyInsertionError(MultiIndexError):
    """Raised when the empty multi-index is inserted."""


class SizeMismatchError(MultiIndexError):
    """Raised when a forest size does not match the norm of the trunk it is inserted into."""


class UndefinedInputError(MultiIndexError):
    pass


class KindMismatchError(MultiIndexError, TypeError):
    pass


class UnknownLawError(MultiIndexError):
    pass


class ParseError(MultiIndexError):
    def __init__(self, message, text="", position=None):
        self.text = text
        self.position = position
        if position is not None:
            message = f"{message} at position {position}"
        super().__init__(message)
