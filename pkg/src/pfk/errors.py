"""Exception hierarchy shared by every pfk module."""


class PfkError(Exception):
    """Base class for all pfk errors."""


class InvalidSubset(PfkError, ValueError):
    pass


class ArityMismatch(PfkError, ValueError):
    pass


class SingularBasis(PfkError, ValueError):
    pass


class UnsupportedMixedResult(PfkError, ValueError):
    pass


class NotSkewSymmetric(PfkError, ValueError):
    pass


class SizeLimit(PfkError, ValueError):
    pass


class LabelCollision(PfkError, ValueError):
    pass


class OrderMismatch(PfkError, ValueError):
    pass


class BudgetExceeded(PfkError, RuntimeError):
    """Raised when a work or time budget runs out.

    ``partial`` carries whatever intermediate result was available
    (e.g. a partial Groebner basis).
    """

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class MissingEmbedding(PfkError, ValueError):
    pass


class NotTreeConnectable(PfkError, ValueError):
    pass


class OddEdgeCount(PfkError, ValueError):
    pass


class UnsupportedWireOrder(PfkError, ValueError):
    pass


class WireMismatch(PfkError, ValueError):
    pass


class NotRational(PfkError, ValueError):
    pass


class SchemeCollision(PfkError, ValueError):
    pass


class ParseError(PfkError, ValueError):
    """Input text could not be parsed; carries a 1-based line/column."""

    def __init__(self, message, line=None, col=None, source=None):
        self.message = message
        self.line = line
        self.col = col
        self.source = source
        where = ""
        if line is not None:
            where = f"{source + ':' if source else ''}{line}:{col or 1}: "
        elif source:
            where = f"{source}: "
        super().__init__(where + message)
