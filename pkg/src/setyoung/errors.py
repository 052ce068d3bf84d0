"""Exception types shared across the package."""


class SetYoungError(Exception):
    """Base class for all package errors."""


class InvalidDirection(SetYoungError, ValueError):
    pass


class DimMismatch(SetYoungError, ValueError):
    pass


class InvalidCoefficient(SetYoungError, ValueError):
    pass


class InvalidMeasure(SetYoungError, ValueError):
    pass


class NoCommonExposingDirection(SetYoungError):
    pass


class InvalidExponent(SetYoungError, ValueError):
    pass


class InvalidHurst(SetYoungError, ValueError):
    pass


class GridError(SetYoungError, ValueError):
    pass


class NumericalFailure(SetYoungError, ArithmeticError):
    pass


class EmptyFamily(SetYoungError):
    """No candidate selection survived certification."""


class InvalidProblem(SetYoungError, ValueError):
    pass


class NonConvergence(SetYoungError):
    """Picard iteration hit its budget; ``report`` holds the last iterate."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ResolutionWarning(UserWarning):
    pass
