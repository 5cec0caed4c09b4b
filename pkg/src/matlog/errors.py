"""Exception hierarchy shared by all modules."""


class MatlogError(Exception):
    """Base class for domain errors raised by matlog."""


class DimensionError(MatlogError, ValueError):
    pass


class SingularMatrixError(MatlogError):
    pass


class SchurConvergenceError(MatlogError):
    def __init__(self, message, matrix=None):
        super().__init__(message)
        self.matrix = matrix


class EigenvalueOnCutError(MatlogError):
    """Spectrum touches the closed half-line ]-inf, 0] within tolerance."""

    def __init__(self, message, eigenvalue=None):
        super().__init__(message)
        self.eigenvalue = eigenvalue


class ExpOverflowError(MatlogError, OverflowError):
    pass


class InterpolationError(MatlogError):
    pass


class BoundaryTooCloseError(MatlogError):
    def __init__(self, message, min_abs=None, suggestion=None):
        super().__init__(message)
        self.min_abs = min_abs
        self.suggestion = suggestion


class NoValidWindowError(MatlogError):
    pass


class CountMismatchError(MatlogError):
    def __init__(self, message, census=None, found=None):
        super().__init__(message)
        self.census = census
        self.found = found


class InvalidCompanionPairError(MatlogError, ValueError):
    pass


class NotHermitianPDError(MatlogError, ValueError):
    pass
