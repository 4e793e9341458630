"""Exception hierarchy.

Errors split along the CLI exit-code boundary: :class:`DataError` covers bad
inputs and malformed files (exit 3), :class:`PreconditionError` covers inputs
that are well-formed but violate an algorithm's requirements (exit 4).
"""


class ShamapError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class DataError(ShamapError, ValueError):
    exit_code = 3


class DimensionMismatchError(DataError):
    pass


class ParseError(DataError):
    pass


class TruncatedHeaderError(ParseError):
    pass


class UnknownTypeError(ParseError):
    pass


class PayloadLengthError(ParseError):
    pass


class BadMagicError(ParseError):
    pass


class MaxvalError(ParseError):
    pass


class TruncatedPayloadError(ParseError):
    pass


class RaggedRowError(ParseError):
    pass


class NonNumericCellError(ParseError):
    pass


class HeterogeneousShapeError(DataError):
    pass


class InsufficientMatchesError(DataError):
    pass


class PreconditionError(ShamapError, ValueError):
    exit_code = 4


class DisconnectedGraphError(PreconditionError):
    def __init__(self, message, components=None):
        super().__init__(message)
        self.components = components


class SpectralDeficiencyError(PreconditionError):
    def __init__(self, message, eigenvalue=None, index=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue
        self.index = index


class DegenerateReferenceError(PreconditionError):
    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class DuplicatePointsError(PreconditionError):
    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = tuple(pairs)


class ConvergenceError(PreconditionError):
    pass


class InternalConsistencyError(ShamapError, ArithmeticError):
    """A numerical invariant was violated beyond rounding tolerance."""

    exit_code = 4
