"""Exception hierarchy shared by every module."""


class ExpanderError(Exception):
    """Base class for all errors raised by this package."""


class PreconditionError(ExpanderError, ValueError):
    """An operation was called on input outside its documented domain."""

    def __init__(self, message, stage=None):
        self.stage = stage
        if stage is not None:
            message = f"[{stage}] {message}"
        super().__init__(message)


class UnknownVertexError(PreconditionError):
    """A vertex id is not a member of the host graph."""


class DegenerateInputError(PreconditionError):
    """The expansion ratio would divide by a zero volume."""


class CapExceededError(PreconditionError):
    """The brute-force oracle refused a graph larger than its cap."""


class ParseError(ExpanderError, ValueError):
    """A text or JSON input could not be parsed.

    ``line`` is 1-based when the failure is attributable to one line.
    """

    def __init__(self, message, line=None, source=None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where = f"{source}:"
        if line is not None:
            where = f"{where}{line}:"
        if where:
            message = f"{where} {message}"
        super().__init__(message)
