"""Exception types shared across the package."""


class BlockMtError(Exception):
    """Base class for all blockmt errors."""


class ParseError(BlockMtError):
    """Malformed input text; carries the 1-based line number when known."""

    def __init__(self, message: str, line_number: int | None = None):
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)
        self.line_number = line_number


class MalformedLineError(ParseError):
    pass


class EmptySentenceError(ParseError):
    pass


class EncodingError(ParseError):
    pass


class ReservedTokenError(ParseError):
    pass


class EmptyModelError(BlockMtError):
    pass


class EmptyInputError(BlockMtError):
    pass


class ModelFormatError(BlockMtError):
    pass


class ChecksumError(ModelFormatError):
    pass


class UnsupportedSectionError(ModelFormatError):
    pass


class UnsupportedVersionError(ModelFormatError):
    pass


class OracleBoundError(BlockMtError):
    pass
