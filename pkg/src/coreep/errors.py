"""Exception hierarchy shared by every coreep module."""


class CoreEPError(Exception):
    """Base class for all errors raised by coreep."""


class ShapeMismatch(CoreEPError, ValueError):
    pass


class NonFiniteMatrix(CoreEPError, ValueError):
    pass


class NonOrthonormalInput(CoreEPError, ValueError):
    pass


class ResidualTooLarge(CoreEPError):
    """A structural residual exceeded tolerance.

    Usually means a rank or index decision sat on a tolerance boundary.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class RouteDisagreement(CoreEPError):
    """Two independent computation routes produced different results."""

    def __init__(self, message, discrepancy=None):
        super().__init__(message)
        self.discrepancy = discrepancy


class IndexTooLarge(CoreEPError):
    """An operation defined only for index <= 1 received a larger index."""

    def __init__(self, index, which="A"):
        super().__init__(f"IndexTooLarge: Ind({which}) = {index} > 1")
        self.index = index
        self.which = which


class CharacterizationDisagreement(CoreEPError):
    """Two equivalent characterizations of an order gave different verdicts."""

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = dict(residuals or {})


class InfeasibleSpec(CoreEPError, ValueError):
    pass


class ParseError(CoreEPError, ValueError):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class RaggedRows(ParseError):
    pass
