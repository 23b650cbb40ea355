"""Exception hierarchy shared by every module."""


class SummarizeError(Exception):
    """Base class for all errors raised by hiersumm."""


class StructureError(SummarizeError, ValueError):
    """A tree or product node is malformed or refers to unknown nodes."""


class InputError(SummarizeError, ValueError):
    """Data handed to the library violates a documented precondition."""


class ParseError(InputError):
    """A file row could not be parsed."""

    def __init__(self, message, *, path=None, line=None):
        self.path = path
        self.line = line
        where = ""
        if path is not None:
            where += f"{path}"
        if line is not None:
            where += f":{line}"
        super().__init__(f"{where}: {message}" if where else message)


class ConfigError(SummarizeError, ValueError):
    """Solver or weight-function parameters are invalid."""


class CapacityError(SummarizeError, RuntimeError):
    """An exhaustive routine was asked to handle an instance beyond its guard."""
