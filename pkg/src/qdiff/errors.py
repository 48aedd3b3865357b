"""Exception hierarchy shared by every qdiff module."""


class QDiffError(Exception):
    """Base class for all errors raised by qdiff."""


class ZeroDenominator(QDiffError, ZeroDivisionError):
    pass


class PoleAtOne(QDiffError):
    pass


class NotVanishingAtOne(QDiffError):
    pass


class DegreeMismatch(QDiffError):
    pass


class ParseError(QDiffError):
    """Malformed coefficient, expression or ``.qalg`` text.

    ``line`` and ``column`` are 1-based and refer to the offending text.
    """

    def __init__(self, message, line=1, column=1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class MissingRelation(QDiffError):
    pass


class InvalidAlgebra(QDiffError):
    pass


class InhomogeneousAlgebra(QDiffError):
    pass


class PositionOutOfRange(QDiffError):
    pass


class NoConvergence(QDiffError):
    pass


class DegreeBudgetExceeded(QDiffError):
    pass


class NotQuasipolynomial(QDiffError):
    pass


class WrongAlgebra(QDiffError):
    pass


class SingularSystem(QDiffError):
    pass
