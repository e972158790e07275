"""Exception hierarchy shared by all modules."""


class RemezSpanError(Exception):
    """Base class for every error raised by remezspan."""


class InvalidParameterError(RemezSpanError, ValueError):
    pass


class InsufficientPointsError(RemezSpanError, ValueError):
    pass


class TooLargeError(RemezSpanError, ValueError):
    pass


class ParseError(RemezSpanError, ValueError):
    """Malformed point-set or polynomial file.

    ``index`` is the offending line (CSV) or element (JSON) index when known.
    """

    def __init__(self, message, index=None):
        if index is not None:
            message = f"{message} (at index {index})"
        super().__init__(message)
        self.index = index


class NotApplicableError(RemezSpanError):
    """The requested bound or quantity is undefined for this input."""


class IndefiniteSetError(NotApplicableError):
    """The set lies on the zero set of a nonzero polynomial of the given degree."""

    def __init__(self, message, rank=None, dim=None):
        super().__init__(message)
        self.rank = rank
        self.dim = dim


class DivergentError(RemezSpanError, ValueError):
    pass


class FalsificationFound(RemezSpanError):
    """A polynomial exceeded the claimed bound; carries the full report."""

    def __init__(self, report):
        super().__init__(
            f"bound {report.bound!r} violated: max ratio {report.max_ratio!r} "
            f"({report.violations} of {report.trials} trials)"
        )
        self.report = report
