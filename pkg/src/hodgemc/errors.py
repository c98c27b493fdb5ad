"""Exception hierarchy shared by every hodgemc module."""


class HodgeError(Exception):
    """Base class for all errors raised by hodgemc."""


class InvalidArgument(HodgeError, ValueError):
    pass


class UnavailableInvariant(HodgeError):
    """Raised when a global invariant (delta) is needed but not known."""


class InconsistentData(HodgeError):
    """The numerical data cannot come from a genuine module."""


class DegenerateConvolution(HodgeError):
    pass


class PreconditionError(HodgeError):
    pass


class StuckChain(HodgeError):
    def __init__(self, message, snapshot=None):
        super().__init__(message)
        self.snapshot = snapshot


class UnsupportedEigenvalue(HodgeError):
    pass


class ParseError(HodgeError):
    def __init__(self, message, field=None, line=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field}")
        if where:
            message = f"{message} ({', '.join(where)})"
        super().__init__(message)
        self.field = field
        self.line = line
