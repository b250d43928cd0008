"""Exception types shared across the package."""


class ReslieError(Exception):
    pass


class DivisionByZero(ReslieError, ZeroDivisionError):
    pass


class AmbientMismatch(ReslieError, ValueError):
    pass


class SizeLimit(ReslieError):
    """Raised instead of attempting a computation above the supported size."""


class NotAbelian(ReslieError, ValueError):
    pass


class NotNilpotent(ReslieError, ValueError):
    pass


class NotPNilpotent(ReslieError, ValueError):
    pass


class NotAnIdeal(ReslieError, ValueError):
    pass


class ValidationError(ReslieError, ValueError):
    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ParseError(ReslieError, ValueError):
    def __init__(self, message, line=0, column=0, source="<string>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source
